#ifndef TWEETLAB_MODELS_HPP
#define TWEETLAB_MODELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tweetlab/textvec.hpp"

namespace tweetlab {

struct TrainConfig {
    double learning_rate = 0.1;
    int max_epochs = 500;
    double l2_lambda = 1e-4;
    double tolerance = 1e-6;  // absolute loss decrease
    std::uint64_t seed = 0;
};

enum class ModelKind { logistic, hinge };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Row-sparse design matrix; dense feature rows convert via from_dense.
struct SparseMatrix {
    std::size_t n_cols = 0;
    std::vector<SparseVector> rows;

    static SparseMatrix from_dense(const std::vector<std::vector<double>>& dense);
    std::size_t n_rows() const { return rows.size(); }
};

struct TrainedModel {
    ModelKind kind = ModelKind::logistic;
    std::vector<double> weights;
    double bias = 0.0;
    double final_loss = 0.0;
    int epochs_run = 0;
    TrainConfig config;
    std::vector<std::string> column_names;  // empty for n-gram models

    std::string to_json() const;
    static TrainedModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static TrainedModel load(const std::string& path);
};

// Cross-entropy + (lambda/2)||w||^2 (bias unpenalized) and its exact
// gradient; the returned vector is d weight components plus the bias
// component last.
std::pair<double, std::vector<double>> logistic_loss_grad(const std::vector<double>& weights,
                                                          double bias, const SparseMatrix& X,
                                                          const std::vector<bool>& y,
                                                          double l2_lambda);

// Full-batch gradient descent from zero initialization; the step is halved
// whenever a step would increase the loss, so the loss trace is
// non-increasing. Deterministic.
TrainedModel train_logistic(const SparseMatrix& X, const std::vector<bool>& y,
                            const TrainConfig& config);

// Hinge loss with step 1/(lambda*t) per-example sub-gradient updates in
// fixed row order; returns the last epoch's averaged iterate. Deterministic.
TrainedModel train_svm(const SparseMatrix& X, const std::vector<bool>& y,
                       const TrainConfig& config);

double decision_value(const TrainedModel& model, const SparseVector& x);
double predict_proba(const TrainedModel& model, const SparseVector& x);

// Logistic: proba >= threshold; hinge: decision value >= 0. Ties positive.
bool predict(const TrainedModel& model, const SparseVector& x, double threshold = 0.5);

std::vector<bool> predict_all(const TrainedModel& model, const SparseMatrix& X,
                              double threshold = 0.5);

}  // namespace tweetlab

#endif
