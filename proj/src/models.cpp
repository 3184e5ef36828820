#include "tweetlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tweetlab/text_util.hpp"
#include "json.hpp"

namespace tweetlab {

using nlohmann::json;

const char* to_string(ModelKind kind) {
    return kind == ModelKind::logistic ? "logistic" : "hinge";
}

ModelKind model_kind_from_string(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "logistic" || n == "regression") return ModelKind::logistic;
    if (n == "hinge" || n == "svm") return ModelKind::hinge;
    throw std::invalid_argument("unknown model kind '" + name + "' (expected logistic|hinge)");
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>>& dense) {
    SparseMatrix m;
    m.n_cols = dense.empty() ? 0 : dense[0].size();
    m.rows.reserve(dense.size());
    for (const auto& row : dense) {
        SparseVector v;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] != 0.0) v.push_back({static_cast<std::uint32_t>(j), row[j]});
        }
        m.rows.push_back(std::move(v));
    }
    return m;
}

namespace {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

// log(sigmoid(z)) without overflow.
double log_sigmoid(double z) {
    if (z >= 0.0) return -std::log1p(std::exp(-z));
    return z - std::log1p(std::exp(z));
}

void check_training_input(const SparseMatrix& X, const std::vector<bool>& y) {
    if (X.n_rows() != y.size()) throw std::invalid_argument("X/y row mismatch");
    if (y.size() < 2) throw std::invalid_argument("need at least two training rows");
    bool pos = false, neg = false;
    for (bool v : y) (v ? pos : neg) = true;
    if (!pos || !neg) {
        throw std::invalid_argument(
            "training data contains a single class; use a constant classifier instead");
    }
}

}  // namespace

std::pair<double, std::vector<double>> logistic_loss_grad(const std::vector<double>& weights,
                                                          double bias, const SparseMatrix& X,
                                                          const std::vector<bool>& y,
                                                          double l2_lambda) {
    if (weights.size() != X.n_cols) throw std::invalid_argument("weight/column mismatch");
    if (X.n_rows() != y.size()) throw std::invalid_argument("X/y row mismatch");
    for (double w : weights) {
        if (!std::isfinite(w)) throw std::invalid_argument("non-finite weight");
    }
    if (!std::isfinite(bias)) throw std::invalid_argument("non-finite bias");

    const double n = static_cast<double>(X.n_rows());
    double loss = 0.0;
    std::vector<double> grad(weights.size() + 1, 0.0);
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
        double z = dot(X.rows[i], weights) + bias;
        double target = y[i] ? 1.0 : 0.0;
        // y*log(p) + (1-y)*log(1-p) == log_sigmoid(z) - (1-y)*z
        loss -= y[i] ? log_sigmoid(z) : log_sigmoid(-z);
        double err = sigmoid(z) - target;
        for (const SparseEntry& e : X.rows[i]) grad[e.index] += err * e.value;
        grad.back() += err;
    }
    loss /= n;
    for (double& g : grad) g /= n;
    double penalty = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        penalty += weights[j] * weights[j];
        grad[j] += l2_lambda * weights[j];
    }
    loss += 0.5 * l2_lambda * penalty;
    return {loss, std::move(grad)};
}

TrainedModel train_logistic(const SparseMatrix& X, const std::vector<bool>& y,
                            const TrainConfig& config) {
    check_training_input(X, y);
    TrainedModel model;
    model.kind = ModelKind::logistic;
    model.config = config;
    model.weights.assign(X.n_cols, 0.0);
    model.bias = 0.0;

    auto [loss, grad] = logistic_loss_grad(model.weights, model.bias, X, y, config.l2_lambda);
    double step = config.learning_rate;
    int epoch = 0;
    for (; epoch < config.max_epochs; ++epoch) {
        std::vector<double> w_next(model.weights.size());
        double b_next;
        double loss_next;
        std::vector<double> grad_next;
        // Halve the step until the loss does not increase.
        for (;;) {
            for (std::size_t j = 0; j < model.weights.size(); ++j) {
                w_next[j] = model.weights[j] - step * grad[j];
            }
            b_next = model.bias - step * grad.back();
            std::tie(loss_next, grad_next) =
                logistic_loss_grad(w_next, b_next, X, y, config.l2_lambda);
            if (loss_next <= loss || step < 1e-15) break;
            step *= 0.5;
        }
        double decrease = loss - loss_next;
        model.weights.swap(w_next);
        model.bias = b_next;
        loss = loss_next;
        grad.swap(grad_next);
        if (decrease < config.tolerance) {
            ++epoch;
            break;
        }
    }
    model.final_loss = loss;
    model.epochs_run = epoch;
    return model;
}

TrainedModel train_svm(const SparseMatrix& X, const std::vector<bool>& y,
                       const TrainConfig& config) {
    check_training_input(X, y);
    // The 1/(lambda*t) step needs lambda > 0; clamp so lambda=0 configs
    // still train (effectively unregularized).
    const double lambda = std::max(config.l2_lambda, 1e-12);

    TrainedModel model;
    model.kind = ModelKind::hinge;
    model.config = config;
    std::vector<double> w(X.n_cols, 0.0);
    double b = 0.0;
    std::vector<double> w_avg(X.n_cols, 0.0);
    double b_avg = 0.0;

    std::int64_t t = 0;
    const std::size_t n = X.n_rows();
    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        bool last = epoch + 1 == config.max_epochs;
        if (last) {
            std::fill(w_avg.begin(), w_avg.end(), 0.0);
            b_avg = 0.0;
        }
        for (std::size_t i = 0; i < n; ++i) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double target = y[i] ? 1.0 : -1.0;
            const double margin = target * (dot(X.rows[i], w) + b);
            const double shrink = 1.0 - eta * lambda;
            for (double& wj : w) wj *= shrink;
            if (margin < 1.0) {
                for (const SparseEntry& e : X.rows[i]) w[e.index] += eta * target * e.value;
                b += eta * target;
            }
            if (last) {
                for (std::size_t j = 0; j < w.size(); ++j) w_avg[j] += w[j];
                b_avg += b;
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& wj : w_avg) wj *= inv;
    model.weights = std::move(w_avg);
    model.bias = b_avg * inv;
    model.epochs_run = config.max_epochs;

    double hinge_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double target = y[i] ? 1.0 : -1.0;
        hinge_sum += std::max(0.0, 1.0 - target * (dot(X.rows[i], model.weights) + model.bias));
    }
    double penalty = 0.0;
    for (double wj : model.weights) penalty += wj * wj;
    model.final_loss = hinge_sum / static_cast<double>(n) + 0.5 * lambda * penalty;
    return model;
}

double decision_value(const TrainedModel& model, const SparseVector& x) {
    for (const SparseEntry& e : x) {
        if (e.index >= model.weights.size()) {
            throw std::invalid_argument("feature index " + std::to_string(e.index) +
                                        " out of range for model of dimension " +
                                        std::to_string(model.weights.size()));
        }
    }
    return dot(x, model.weights) + model.bias;
}

double predict_proba(const TrainedModel& model, const SparseVector& x) {
    if (model.kind != ModelKind::logistic) {
        throw std::invalid_argument("predict_proba requires a logistic model");
    }
    return sigmoid(decision_value(model, x));
}

bool predict(const TrainedModel& model, const SparseVector& x, double threshold) {
    if (model.kind == ModelKind::logistic) {
        return predict_proba(model, x) >= threshold;
    }
    return decision_value(model, x) >= 0.0;
}

std::vector<bool> predict_all(const TrainedModel& model, const SparseMatrix& X,
                              double threshold) {
    std::vector<bool> out;
    out.reserve(X.n_rows());
    for (const SparseVector& row : X.rows) out.push_back(predict(model, row, threshold));
    return out;
}

std::string TrainedModel::to_json() const {
    json obj;
    obj["format"] = "tweetlab-model";
    obj["version"] = 1;
    obj["kind"] = std::string(to_string(kind));
    obj["weights"] = weights;
    obj["bias"] = bias;
    obj["final_loss"] = final_loss;
    obj["epochs_run"] = epochs_run;
    obj["config"] = {{"learning_rate", config.learning_rate},
                     {"max_epochs", config.max_epochs},
                     {"l2_lambda", config.l2_lambda},
                     {"tolerance", config.tolerance},
                     {"seed", config.seed}};
    obj["column_names"] = column_names;
    return obj.dump();
}

TrainedModel TrainedModel::from_json(const std::string& text) {
    json obj = json::parse(text);
    if (obj.value("format", "") != "tweetlab-model") {
        throw std::invalid_argument("not a model file");
    }
    TrainedModel m;
    m.kind = model_kind_from_string(obj.at("kind").get<std::string>());
    m.weights = obj.at("weights").get<std::vector<double>>();
    m.bias = obj.at("bias").get<double>();
    m.final_loss = obj.value("final_loss", 0.0);
    m.epochs_run = obj.value("epochs_run", 0);
    const json& c = obj.at("config");
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.max_epochs = c.at("max_epochs").get<int>();
    m.config.l2_lambda = c.at("l2_lambda").get<double>();
    m.config.tolerance = c.at("tolerance").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.column_names = obj.value("column_names", std::vector<std::string>{});
    return m;
}

void TrainedModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json() << "\n";
}

TrainedModel TrainedModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace tweetlab
