#include "tweetlab/textvec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tweetlab/text_util.hpp"
#include "json.hpp"

namespace tweetlab {

using nlohmann::json;

double dot(const SparseVector& a, std::span<const double> dense) {
    double s = 0.0;
    for (const SparseEntry& e : a) s += e.value * dense[e.index];
    return s;
}

double l2_norm(const SparseVector& v) {
    double s = 0.0;
    for (const SparseEntry& e : v) s += e.value * e.value;
    return std::sqrt(s);
}

namespace {

void check_ngram_range(int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) {
        throw std::invalid_argument("invalid n-gram range [" + std::to_string(n_min) + ", " +
                                    std::to_string(n_max) + "]");
    }
}

template <typename Sink>
void for_each_ngram(std::string_view text, int n_min, int n_max, bool lowercase, Sink&& sink) {
    std::string lowered;
    if (lowercase) {
        lowered = to_lower(text);
        text = lowered;
    }
    std::u32string cps = utf8_decode(text);
    for (int n = n_min; n <= n_max; ++n) {
        if (cps.size() < static_cast<std::size_t>(n)) break;
        for (std::size_t i = 0; i + n <= cps.size(); ++i) {
            sink(utf8_encode(std::u32string_view(cps).substr(i, n)));
        }
    }
}

}  // namespace

std::map<std::string, std::int64_t> char_ngrams(std::string_view text, int n_min, int n_max) {
    check_ngram_range(n_min, n_max);
    std::map<std::string, std::int64_t> counts;
    for_each_ngram(text, n_min, n_max, /*lowercase=*/false,
                   [&](std::string gram) { ++counts[std::move(gram)]; });
    return counts;
}

FittedVectorizer FittedVectorizer::fit(std::span<const std::string> docs,
                                       const VectorizerConfig& config) {
    check_ngram_range(config.n_min, config.n_max);
    if (config.min_df < 1) throw std::invalid_argument("min_df must be >= 1");
    if (docs.empty()) throw std::invalid_argument("fit requires at least one document");

    std::unordered_map<std::string, std::int64_t> df;
    std::unordered_map<std::string, std::int64_t> per_doc;
    for (const std::string& doc : docs) {
        per_doc.clear();
        for_each_ngram(doc, config.n_min, config.n_max, config.lowercase,
                       [&](std::string gram) { ++per_doc[std::move(gram)]; });
        for (const auto& [gram, _] : per_doc) ++df[gram];
    }

    FittedVectorizer v;
    v.config_ = config;
    v.n_docs_ = static_cast<std::int64_t>(docs.size());
    v.terms_.reserve(df.size());
    for (const auto& [gram, d] : df) {
        if (d >= config.min_df) v.terms_.push_back(gram);
    }
    std::sort(v.terms_.begin(), v.terms_.end());
    v.idf_.resize(v.terms_.size());
    v.vocab_.reserve(v.terms_.size());
    const double n = static_cast<double>(v.n_docs_);
    for (std::size_t i = 0; i < v.terms_.size(); ++i) {
        v.vocab_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
        v.idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[v.terms_[i]]))) + 1.0;
    }
    return v;
}

SparseVector FittedVectorizer::transform(std::string_view doc) const {
    std::unordered_map<std::uint32_t, std::int64_t> tf;
    for_each_ngram(doc, config_.n_min, config_.n_max, config_.lowercase, [&](std::string gram) {
        auto it = vocab_.find(gram);
        if (it != vocab_.end()) ++tf[it->second];
    });

    SparseVector vec;
    vec.reserve(tf.size());
    for (const auto& [col, count] : tf) {
        double w = static_cast<double>(count);
        if (config_.weighting == TermWeighting::binary) {
            w = 1.0;
        } else if (config_.sublinear_tf) {
            w = 1.0 + std::log(w);
        }
        if (config_.weighting == TermWeighting::tfidf) w *= idf_[col];
        vec.push_back({col, w});
    }
    std::sort(vec.begin(), vec.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    if (config_.l2_normalize) {
        double norm = l2_norm(vec);
        if (norm > 0.0) {
            for (SparseEntry& e : vec) e.value /= norm;
        }
    }
    return vec;
}

std::int64_t FittedVectorizer::column_of(const std::string& term) const {
    auto it = vocab_.find(term);
    return it == vocab_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::string FittedVectorizer::to_json() const {
    json obj;
    obj["format"] = "tweetlab-vectorizer";
    obj["version"] = 1;
    obj["config"] = {{"n_min", config_.n_min},
                     {"n_max", config_.n_max},
                     {"lowercase", config_.lowercase},
                     {"min_df", config_.min_df},
                     {"sublinear_tf", config_.sublinear_tf},
                     {"l2_normalize", config_.l2_normalize},
                     {"weighting", config_.weighting == TermWeighting::tfidf    ? "tfidf"
                                   : config_.weighting == TermWeighting::count ? "count"
                                                                               : "binary"}};
    obj["n_docs"] = n_docs_;
    obj["vocabulary"] = terms_;
    obj["idf"] = idf_;
    return obj.dump();
}

FittedVectorizer FittedVectorizer::from_json(const std::string& text) {
    json obj = json::parse(text);
    if (obj.value("format", "") != "tweetlab-vectorizer") {
        throw std::invalid_argument("not a vectorizer file");
    }
    FittedVectorizer v;
    const json& c = obj.at("config");
    v.config_.n_min = c.at("n_min").get<int>();
    v.config_.n_max = c.at("n_max").get<int>();
    v.config_.lowercase = c.at("lowercase").get<bool>();
    v.config_.min_df = c.at("min_df").get<int>();
    v.config_.sublinear_tf = c.at("sublinear_tf").get<bool>();
    v.config_.l2_normalize = c.at("l2_normalize").get<bool>();
    std::string w = c.at("weighting").get<std::string>();
    v.config_.weighting = w == "tfidf"   ? TermWeighting::tfidf
                          : w == "count" ? TermWeighting::count
                                         : TermWeighting::binary;
    v.n_docs_ = obj.at("n_docs").get<std::int64_t>();
    v.terms_ = obj.at("vocabulary").get<std::vector<std::string>>();
    v.idf_ = obj.at("idf").get<std::vector<double>>();
    if (v.terms_.size() != v.idf_.size()) {
        throw std::invalid_argument("vocabulary/idf size mismatch");
    }
    v.vocab_.reserve(v.terms_.size());
    for (std::size_t i = 0; i < v.terms_.size(); ++i) {
        v.vocab_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
    }
    return v;
}

void FittedVectorizer::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json() << "\n";
}

FittedVectorizer FittedVectorizer::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("standardize requires at least one row");
    const std::size_t d = rows[0].size();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    const double n = static_cast<double>(rows.size());
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < d; ++j) s.mean[j] /= n;
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < d; ++j) {
            double dev = row[j] - s.mean[j];
            s.stddev[j] += dev * dev;
        }
    }
    for (std::size_t j = 0; j < d; ++j) s.stddev[j] = std::sqrt(s.stddev[j] / n);
    return s;
}

std::vector<double> Standardizer::apply_row(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        out[j] = stddev[j] > 0.0 ? (row[j] - mean[j]) / stddev[j] : 0.0;
    }
    return out;
}

void Standardizer::apply(std::vector<std::vector<double>>& rows) const {
    for (auto& row : rows) row = apply_row(row);
}

}  // namespace tweetlab
