#include "tweetlab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tweetlab {

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) out.push_back(i);
    }
    return out;
}

FoldPlan stratified_kfold(const std::vector<bool>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] ? pos : neg).push_back(i);
    }
    if (static_cast<int>(pos.size()) < k) {
        throw std::invalid_argument("positive class has " + std::to_string(pos.size()) +
                                    " rows, fewer than k=" + std::to_string(k));
    }
    if (static_cast<int>(neg.size()) < k) {
        throw std::invalid_argument("negative class has " + std::to_string(neg.size()) +
                                    " rows, fewer than k=" + std::to_string(k));
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(labels.size(), 0);
    std::mt19937_64 rng(seed);
    for (std::vector<std::size_t>* cls : {&pos, &neg}) {
        std::shuffle(cls->begin(), cls->end(), rng);
        for (std::size_t i = 0; i < cls->size(); ++i) {
            plan.assignment[(*cls)[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
        }
    }
    return plan;
}

Metrics confusion_and_metrics(const std::vector<bool>& y_true, const std::vector<bool>& y_pred) {
    if (y_true.size() != y_pred.size() || y_true.empty()) {
        throw std::invalid_argument("confusion_and_metrics needs equal, non-empty inputs");
    }
    Metrics m;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] && y_pred[i]) ++m.confusion.tp;
        else if (!y_true[i] && y_pred[i]) ++m.confusion.fp;
        else if (y_true[i] && !y_pred[i]) ++m.confusion.fn;
        else ++m.confusion.tn;
    }
    const Confusion& c = m.confusion;
    const double n = static_cast<double>(c.total());
    m.accuracy = static_cast<double>(c.tp + c.tn) / n;
    m.precision_defined = c.tp + c.fp > 0;
    m.recall_defined = c.tp + c.fn > 0;
    m.precision = m.precision_defined ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
    m.recall = m.recall_defined ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
    m.f1_positive =
        (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                       : 0.0;
    // Negative-class F1 for the support-weighted average.
    double prec_neg = (c.tn + c.fn) > 0 ? static_cast<double>(c.tn) / (c.tn + c.fn) : 0.0;
    double rec_neg = (c.tn + c.fp) > 0 ? static_cast<double>(c.tn) / (c.tn + c.fp) : 0.0;
    double f1_neg =
        (prec_neg + rec_neg) > 0.0 ? 2.0 * prec_neg * rec_neg / (prec_neg + rec_neg) : 0.0;
    double support_pos = static_cast<double>(c.tp + c.fn);
    double support_neg = static_cast<double>(c.tn + c.fp);
    m.f1_weighted = (support_pos * m.f1_positive + support_neg * f1_neg) / n;
    return m;
}

CvReport cross_validate(const PipelineFactory& make_pipeline, const std::vector<bool>& y,
                        const FoldPlan& plan) {
    if (plan.assignment.size() != y.size()) {
        throw std::invalid_argument("fold plan does not match label count");
    }
    CvReport report;
    for (int fold = 0; fold < plan.k; ++fold) {
        auto train = plan.train_rows(fold);
        auto test = plan.test_rows(fold);
        std::unique_ptr<Pipeline> pipeline = make_pipeline();
        try {
            pipeline->fit(train);
        } catch (const std::exception& e) {
            throw std::runtime_error("fold " + std::to_string(fold) + ": " + e.what());
        }
        std::vector<bool> pred = pipeline->predict(test);
        std::vector<bool> truth;
        truth.reserve(test.size());
        for (std::size_t i : test) truth.push_back(y[i]);
        report.per_fold.push_back(confusion_and_metrics(truth, pred));
    }
    Metrics& mean = report.mean;
    for (const Metrics& m : report.per_fold) {
        mean.accuracy += m.accuracy;
        mean.precision += m.precision;
        mean.recall += m.recall;
        mean.f1_positive += m.f1_positive;
        mean.f1_weighted += m.f1_weighted;
        mean.confusion.tp += m.confusion.tp;
        mean.confusion.fp += m.confusion.fp;
        mean.confusion.fn += m.confusion.fn;
        mean.confusion.tn += m.confusion.tn;
        mean.precision_defined &= m.precision_defined;
        mean.recall_defined &= m.recall_defined;
    }
    const double k = static_cast<double>(plan.k);
    mean.accuracy /= k;
    mean.precision /= k;
    mean.recall /= k;
    mean.f1_positive /= k;
    mean.f1_weighted /= k;
    return report;
}

DetectPipeline::DetectPipeline(std::vector<std::string> docs, std::vector<bool> labels,
                               VectorizerConfig vec_config, ModelKind kind,
                               TrainConfig train_config)
    : docs_(std::move(docs)),
      labels_(std::move(labels)),
      vec_config_(vec_config),
      kind_(kind),
      train_config_(train_config) {
    if (docs_.size() != labels_.size()) throw std::invalid_argument("docs/labels mismatch");
}

void DetectPipeline::fit(std::span<const std::size_t> train_rows) {
    std::vector<std::string> train_docs;
    std::vector<bool> train_labels;
    train_docs.reserve(train_rows.size());
    for (std::size_t i : train_rows) {
        train_docs.push_back(docs_[i]);
        train_labels.push_back(labels_[i]);
    }
    vectorizer_ = std::make_unique<FittedVectorizer>(FittedVectorizer::fit(train_docs, vec_config_));
    SparseMatrix X;
    X.n_cols = vectorizer_->vocabulary_size();
    X.rows.reserve(train_docs.size());
    for (const std::string& doc : train_docs) X.rows.push_back(vectorizer_->transform(doc));
    model_ = kind_ == ModelKind::logistic ? train_logistic(X, train_labels, train_config_)
                                          : train_svm(X, train_labels, train_config_);
}

std::vector<bool> DetectPipeline::predict(std::span<const std::size_t> rows) const {
    if (!vectorizer_) throw std::logic_error("pipeline not fitted");
    std::vector<bool> out;
    out.reserve(rows.size());
    for (std::size_t i : rows) {
        out.push_back(tweetlab::predict(model_, vectorizer_->transform(docs_[i])));
    }
    return out;
}

const FittedVectorizer& DetectPipeline::vectorizer() const {
    if (!vectorizer_) throw std::logic_error("pipeline not fitted");
    return *vectorizer_;
}

PopularityPipeline::PopularityPipeline(FeatureMatrix matrix, std::vector<bool> labels,
                                       ModelKind kind, TrainConfig train_config)
    : matrix_(std::move(matrix)),
      labels_(std::move(labels)),
      kind_(kind),
      train_config_(train_config) {
    if (matrix_.rows.size() != labels_.size()) {
        throw std::invalid_argument("matrix/labels mismatch");
    }
}

void PopularityPipeline::fit(std::span<const std::size_t> train_rows) {
    std::vector<std::vector<double>> train;
    std::vector<bool> train_labels;
    train.reserve(train_rows.size());
    for (std::size_t i : train_rows) {
        train.push_back(matrix_.rows[i]);
        train_labels.push_back(labels_[i]);
    }
    standardizer_ = Standardizer::fit(train);
    standardizer_.apply(train);
    SparseMatrix X = SparseMatrix::from_dense(train);
    X.n_cols = matrix_.column_names.size();
    model_ = kind_ == ModelKind::logistic ? train_logistic(X, train_labels, train_config_)
                                          : train_svm(X, train_labels, train_config_);
    model_.column_names = matrix_.column_names;
}

std::vector<bool> PopularityPipeline::predict(std::span<const std::size_t> rows) const {
    if (model_.weights.empty() && matrix_.column_names.empty()) {
        throw std::logic_error("pipeline not fitted");
    }
    std::vector<bool> out;
    out.reserve(rows.size());
    for (std::size_t i : rows) {
        std::vector<double> row = standardizer_.apply_row(matrix_.rows[i]);
        SparseVector x;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] != 0.0) x.push_back({static_cast<std::uint32_t>(j), row[j]});
        }
        out.push_back(tweetlab::predict(model_, x));
    }
    return out;
}

namespace {

double gamma_q_series(double a, double x) {
    // P(a,x) by series, returned as Q = 1 - P.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return 1.0 - p;
}

double gamma_q_contfrac(double a, double x) {
    // Lentz's continued fraction for Q(a,x).
    const double fpmin = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_q domain error");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? gamma_q_series(a, x) : gamma_q_contfrac(a, x);
}

double chi2_survival(double statistic, int df) {
    if (df < 1) throw std::invalid_argument("df must be >= 1");
    if (statistic <= 0.0) return 1.0;
    double q = regularized_gamma_q(0.5 * df, 0.5 * statistic);
    return std::clamp(q, 0.0, 1.0);
}

Chi2Result chi2_test(const std::vector<std::vector<double>>& observed) {
    const std::size_t r = observed.size();
    if (r < 2) throw std::invalid_argument("chi2_test needs at least 2 rows");
    const std::size_t c = observed[0].size();
    if (c < 2) throw std::invalid_argument("chi2_test needs at least 2 columns");
    std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        if (observed[i].size() != c) throw std::invalid_argument("ragged contingency table");
        for (std::size_t j = 0; j < c; ++j) {
            if (observed[i][j] < 0.0) throw std::invalid_argument("negative observed count");
            row_sum[i] += observed[i][j];
            col_sum[j] += observed[i][j];
            total += observed[i][j];
        }
    }
    if (total <= 0.0) throw std::invalid_argument("empty contingency table");
    for (double s : row_sum) {
        if (s <= 0.0) throw std::invalid_argument("contingency table has an empty row");
    }
    for (double s : col_sum) {
        if (s <= 0.0) throw std::invalid_argument("contingency table has an empty column");
    }
    Chi2Result result;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            double expected = row_sum[i] * col_sum[j] / total;
            double diff = observed[i][j] - expected;
            result.statistic += diff * diff / expected;
        }
    }
    result.df = static_cast<int>((r - 1) * (c - 1));
    result.p_value = chi2_survival(result.statistic, result.df);
    return result;
}

InteractionChi2 interaction_chi2(const Corpus& corpus, InteractionKind kind, Chi2Mode mode) {
    InteractionChi2 out;
    out.kind = kind;
    out.mode = mode;
    if (mode == Chi2Mode::binary) {
        // rows: non-hate, hate; cols: no interaction, >=1 interaction
        std::vector<std::vector<double>> table(2, std::vector<double>(2, 0.0));
        for (std::size_t i = 0; i < corpus.tweets().size(); ++i) {
            std::size_t row = corpus.in_subset(i, Subset::hate) ? 1 : 0;
            std::size_t col = interaction_count(corpus, i, kind) >= 1 ? 1 : 0;
            table[row][col] += 1.0;
        }
        out.observed = std::move(table);
        out.column_labels = {"0", "1+"};
    } else {
        InteractionHistogram non_hate = interaction_histogram(corpus, kind, Subset::non_hate);
        InteractionHistogram hate = interaction_histogram(corpus, kind, Subset::hate);
        std::vector<double> top(non_hate.bins.begin(), non_hate.bins.end());
        std::vector<double> bottom(hate.bins.begin(), hate.bins.end());
        std::vector<std::string> labels = {"0", "1", "2", "3", "4", "5+"};
        // Pool the sparse tail until every expected count reaches 5.
        auto expected_ok = [&]() {
            double t1 = std::accumulate(top.begin(), top.end(), 0.0);
            double t2 = std::accumulate(bottom.begin(), bottom.end(), 0.0);
            double total = t1 + t2;
            for (std::size_t j = 0; j < top.size(); ++j) {
                double col = top[j] + bottom[j];
                if (t1 * col / total < 5.0 || t2 * col / total < 5.0) return false;
            }
            return true;
        };
        while (top.size() > 2 && !expected_ok()) {
            top[top.size() - 2] += top.back();
            bottom[bottom.size() - 2] += bottom.back();
            labels[labels.size() - 2] = labels[labels.size() - 2] + "+" ;
            top.pop_back();
            bottom.pop_back();
            labels.pop_back();
        }
        out.observed = {top, bottom};
        out.column_labels = std::move(labels);
    }
    out.result = chi2_test(out.observed);
    return out;
}

double binary_entropy_bits(const std::vector<bool>& labels) {
    if (labels.empty()) return 0.0;
    double pos = 0.0;
    for (bool v : labels) pos += v ? 1.0 : 0.0;
    double p = pos / static_cast<double>(labels.size());
    auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
    return term(p) + term(1.0 - p);
}

double information_gain(std::span<const double> column, const std::vector<bool>& labels,
                        int bins) {
    if (column.size() != labels.size()) throw std::invalid_argument("column/labels mismatch");
    if (bins < 2) throw std::invalid_argument("bins must be >= 2");
    if (labels.empty()) return 0.0;

    const std::size_t n = labels.size();
    std::vector<int> cell(n);

    std::map<double, std::size_t> distinct;
    for (double v : column) {
        if (distinct.size() <= static_cast<std::size_t>(bins)) distinct.emplace(v, 0);
    }
    if (distinct.size() <= static_cast<std::size_t>(bins)) {
        // Few distinct values: each value is its own cell, so any injective
        // remapping of the column yields the same partition.
        std::size_t next = 0;
        for (auto& [v, idx] : distinct) idx = next++;
        for (std::size_t i = 0; i < n; ++i) cell[i] = static_cast<int>(distinct[column[i]]);
    } else {
        // Equal-frequency binning on sorted order; duplicate boundary
        // values collapse into the same bin.
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
        std::vector<double> upper_bounds;
        for (int b = 1; b < bins; ++b) {
            std::size_t cut = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(bins);
            double bound = column[order[cut]];
            if (upper_bounds.empty() || bound > upper_bounds.back()) {
                upper_bounds.push_back(bound);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            int b = static_cast<int>(
                std::lower_bound(upper_bounds.begin(), upper_bounds.end(), column[i]) -
                upper_bounds.begin());
            cell[i] = b;
        }
    }

    std::map<int, std::pair<double, double>> counts;  // cell -> (n_pos, n_total)
    for (std::size_t i = 0; i < n; ++i) {
        auto& [pos, tot] = counts[cell[i]];
        if (labels[i]) pos += 1.0;
        tot += 1.0;
    }
    auto entropy = [](double p) {
        auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
        return term(p) + term(1.0 - p);
    };
    double cond = 0.0;
    for (const auto& [_, pt] : counts) {
        cond += (pt.second / static_cast<double>(n)) * entropy(pt.first / pt.second);
    }
    double ig = binary_entropy_bits(labels) - cond;
    return ig < 0.0 ? 0.0 : ig;  // clamp -0.0 / rounding dust
}

std::vector<IGEntry> rank_features_ig(const FeatureMatrix& matrix, const std::vector<bool>& labels,
                                      int bins) {
    if (matrix.rows.size() != labels.size()) throw std::invalid_argument("matrix/labels mismatch");
    std::vector<IGEntry> out;
    out.reserve(matrix.column_names.size());
    for (std::size_t j = 0; j < matrix.column_names.size(); ++j) {
        out.push_back({matrix.column_names[j], information_gain(matrix.column(j), labels, bins)});
    }
    std::sort(out.begin(), out.end(), [](const IGEntry& a, const IGEntry& b) {
        if (a.ig != b.ig) return a.ig > b.ig;
        return a.feature < b.feature;
    });
    return out;
}

AblationReport ablate(const FeatureMatrix& matrix, const std::vector<bool>& y,
                      const FoldPlan& plan, ModelKind kind, const TrainConfig& config,
                      AblationUnit unit) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> units;
    if (unit == AblationUnit::group) {
        std::map<std::string, std::vector<std::size_t>> by_group;
        for (std::size_t j = 0; j < matrix.column_names.size(); ++j) {
            by_group[to_string(matrix.column_groups[j])].push_back(j);
        }
        units.assign(by_group.begin(), by_group.end());
    } else {
        for (std::size_t j = 0; j < matrix.column_names.size(); ++j) {
            units.push_back({matrix.column_names[j], {j}});
        }
    }
    if (units.size() < 2) throw std::invalid_argument("ablation needs at least 2 units");

    auto run = [&](const FeatureMatrix& m) {
        return cross_validate(
            [&]() { return std::make_unique<PopularityPipeline>(m, y, kind, config); }, y, plan);
    };
    AblationReport report;
    report.full_mean = run(matrix).mean;
    for (const auto& [name, removed] : units) {
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < matrix.column_names.size(); ++j) {
            if (std::find(removed.begin(), removed.end(), j) == removed.end()) keep.push_back(j);
        }
        if (keep.empty()) {
            throw std::invalid_argument("removing unit '" + name + "' would empty the matrix");
        }
        CvReport ablated = run(matrix.select(keep));
        AblationRow row;
        row.unit = name;
        row.delta_accuracy = report.full_mean.accuracy - ablated.mean.accuracy;
        row.delta_f1 = report.full_mean.f1_positive - ablated.mean.f1_positive;
        row.ablated_mean = ablated.mean;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace tweetlab
