#ifndef TWEETLAB_EVAL_HPP
#define TWEETLAB_EVAL_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tweetlab/corpus.hpp"
#include "tweetlab/features.hpp"
#include "tweetlab/models.hpp"
#include "tweetlab/textvec.hpp"

namespace tweetlab {

struct FoldPlan {
    int k = 10;
    std::vector<int> assignment;  // per-row fold index 0..k-1
    std::uint64_t seed = 0;

    std::vector<std::size_t> train_rows(int fold) const;
    std::vector<std::size_t> test_rows(int fold) const;
};

// Within each class, rows are shuffled by a seeded generator and dealt
// round-robin to folds, so per-fold class counts differ by at most one.
FoldPlan stratified_kfold(const std::vector<bool>& labels, int k, std::uint64_t seed);

struct Confusion {
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    std::int64_t total() const { return tp + fp + fn + tn; }
};

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1_positive = 0.0;
    double f1_weighted = 0.0;
    Confusion confusion;
    bool precision_defined = true;  // false when no positive predictions
    bool recall_defined = true;     // false when no positive truths
};

Metrics confusion_and_metrics(const std::vector<bool>& y_true, const std::vector<bool>& y_pred);

// A trainable pipeline over a fixed row universe. fit() must touch only
// the given training rows (preprocessing included); cross_validate relies
// on that for its leakage guarantee.
class Pipeline {
public:
    virtual ~Pipeline() = default;
    virtual void fit(std::span<const std::size_t> train_rows) = 0;
    virtual std::vector<bool> predict(std::span<const std::size_t> rows) const = 0;
};

using PipelineFactory = std::function<std::unique_ptr<Pipeline>()>;

struct CvReport {
    Metrics mean;                   // unweighted mean of per-fold metrics
    std::vector<Metrics> per_fold;
};

CvReport cross_validate(const PipelineFactory& make_pipeline, const std::vector<bool>& y,
                        const FoldPlan& plan);

// Character n-gram TF-IDF + linear model over raw documents.
class DetectPipeline : public Pipeline {
public:
    DetectPipeline(std::vector<std::string> docs, std::vector<bool> labels,
                   VectorizerConfig vec_config, ModelKind kind, TrainConfig train_config);
    void fit(std::span<const std::size_t> train_rows) override;
    std::vector<bool> predict(std::span<const std::size_t> rows) const override;
    const FittedVectorizer& vectorizer() const;

private:
    std::vector<std::string> docs_;
    std::vector<bool> labels_;
    VectorizerConfig vec_config_;
    ModelKind kind_;
    TrainConfig train_config_;
    std::unique_ptr<FittedVectorizer> vectorizer_;
    TrainedModel model_;
};

// Standardized dense features + linear model.
class PopularityPipeline : public Pipeline {
public:
    PopularityPipeline(FeatureMatrix matrix, std::vector<bool> labels, ModelKind kind,
                       TrainConfig train_config);
    void fit(std::span<const std::size_t> train_rows) override;
    std::vector<bool> predict(std::span<const std::size_t> rows) const override;

private:
    FeatureMatrix matrix_;
    std::vector<bool> labels_;
    ModelKind kind_;
    TrainConfig train_config_;
    Standardizer standardizer_;
    TrainedModel model_;
};

struct Chi2Result {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

// Pearson chi-squared independence test on an r x c table of observed
// counts. Expected counts are row*col/total; all must be positive.
Chi2Result chi2_test(const std::vector<std::vector<double>>& observed);

// Upper regularized incomplete gamma Q(a, x) (series for x < a+1,
// continued fraction otherwise); the chi-squared survival function is
// Q(df/2, statistic/2).
double regularized_gamma_q(double a, double x);
double chi2_survival(double statistic, int df);

enum class Chi2Mode { binary, histogram };

struct InteractionChi2 {
    InteractionKind kind;
    Chi2Mode mode;
    Chi2Result result;
    std::vector<std::vector<double>> observed;
    std::vector<std::string> column_labels;
};

// binary: 2x2 (hate vs non-hate) x (interacted vs not). histogram: 2xB
// over bins 0..4,5+ with adjacent bins pooled until every expected count
// is >= 5.
InteractionChi2 interaction_chi2(const Corpus& corpus, InteractionKind kind, Chi2Mode mode);

// H(Y) - H(Y|X) in bits. Columns with more than `bins` distinct values are
// discretized by equal-frequency binning; others are used as-is.
double information_gain(std::span<const double> column, const std::vector<bool>& labels,
                        int bins = 10);

double binary_entropy_bits(const std::vector<bool>& labels);

struct IGEntry {
    std::string feature;
    double ig = 0.0;
};

// Descending IG, ties alphabetical.
std::vector<IGEntry> rank_features_ig(const FeatureMatrix& matrix, const std::vector<bool>& labels,
                                      int bins = 10);

enum class AblationUnit { group, single };

struct AblationRow {
    std::string unit;
    double delta_accuracy = 0.0;   // full - ablated
    double delta_f1 = 0.0;
    Metrics ablated_mean;
};

struct AblationReport {
    Metrics full_mean;
    std::vector<AblationRow> rows;
};

// Cross-validated retrain with each unit's columns removed.
AblationReport ablate(const FeatureMatrix& matrix, const std::vector<bool>& y,
                      const FoldPlan& plan, ModelKind kind, const TrainConfig& config,
                      AblationUnit unit);

}  // namespace tweetlab

#endif
