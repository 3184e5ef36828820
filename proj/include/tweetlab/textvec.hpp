#ifndef TWEETLAB_TEXTVEC_HPP
#define TWEETLAB_TEXTVEC_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tweetlab {

struct SparseEntry {
    std::uint32_t index;
    double value;
    bool operator==(const SparseEntry&) const = default;
};

// Indices strictly increasing, no explicit zeros.
using SparseVector = std::vector<SparseEntry>;

double dot(const SparseVector& a, std::span<const double> dense);
double l2_norm(const SparseVector& v);

enum class TermWeighting { tfidf, count, binary };

struct VectorizerConfig {
    int n_min = 1;
    int n_max = 4;
    bool lowercase = true;
    int min_df = 1;
    bool sublinear_tf = false;
    bool l2_normalize = true;
    TermWeighting weighting = TermWeighting::tfidf;
};

// All character n-grams of lengths n_min..n_max over the code points of
// `text`, with multiplicities. Spaces and punctuation count as characters.
std::map<std::string, std::int64_t> char_ngrams(std::string_view text, int n_min, int n_max);

class FittedVectorizer {
public:
    // Vocabulary = n-grams with df >= min_df, columns in lexicographic
    // order; idf(t) = ln((1+N)/(1+df(t))) + 1.
    static FittedVectorizer fit(std::span<const std::string> docs, const VectorizerConfig& config);

    // tf * idf, L2-normalized when nonzero; out-of-vocabulary n-grams ignored.
    SparseVector transform(std::string_view doc) const;

    std::size_t vocabulary_size() const { return terms_.size(); }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<double>& idf() const { return idf_; }
    const VectorizerConfig& config() const { return config_; }
    std::int64_t n_docs() const { return n_docs_; }

    // Column index of a term, or -1.
    std::int64_t column_of(const std::string& term) const;

    std::string to_json() const;
    static FittedVectorizer from_json(const std::string& text);
    void save(const std::string& path) const;
    static FittedVectorizer load(const std::string& path);

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::uint32_t> vocab_;
    std::vector<double> idf_;
    VectorizerConfig config_;
    std::int64_t n_docs_ = 0;
};

// Fitted per-column centering/scaling stats; population (divide-by-n) std.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;  // 0 for constant columns

    static Standardizer fit(const std::vector<std::vector<double>>& rows);

    // Non-constant columns map to mean 0 / std 1; constant columns to 0.
    void apply(std::vector<std::vector<double>>& rows) const;
    std::vector<double> apply_row(const std::vector<double>& row) const;
};

}  // namespace tweetlab

#endif
