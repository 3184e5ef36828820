#ifndef TWEETLAB_FEATURES_HPP
#define TWEETLAB_FEATURES_HPP

#include <set>
#include <string>
#include <vector>

#include "tweetlab/corpus.hpp"

namespace tweetlab {

enum class FeatureGroup { Tweet, User, Content };

const char* to_string(FeatureGroup group);
FeatureGroup feature_group_from_string(const std::string& name);

struct LexiconSet {
    std::set<std::string> blacklist;
    std::set<std::string> positive;
    std::set<std::string> negative;
    std::set<std::string> subjective;

    // Newline-delimited token files, '#' comments allowed; empty path = empty set.
    static LexiconSet load(const std::string& blacklist_path, const std::string& positive_path,
                           const std::string& negative_path, const std::string& subjective_path);
};

struct FeatureMatrix {
    std::vector<std::string> column_names;
    std::vector<FeatureGroup> column_groups;
    std::vector<std::vector<double>> rows;  // aligned to corpus tweet order

    std::int64_t column_of(const std::string& name) const;
    std::vector<double> column(std::size_t j) const;

    // Column-subset view by kept indices; preserves row order.
    FeatureMatrix select(const std::vector<std::size_t>& keep) const;

    void write_csv(const std::string& path) const;
};

std::vector<std::pair<std::string, double>> extract_tweet_features(const Corpus& corpus,
                                                                   std::size_t row);
std::vector<std::pair<std::string, double>> extract_user_features(const UserRecord& user,
                                                                  std::int64_t reference_time);
std::vector<std::pair<std::string, double>> extract_content_features(const TweetRecord& tweet,
                                                                     const LexiconSet& lexicons);

// Rows in corpus tweet order; columns restricted to the requested groups
// (group order Tweet, User, Content). include_user_id adds the opaque
// author id as an extra User-group column for information-gain analysis;
// it is never part of the default training set.
FeatureMatrix build_matrix(const Corpus& corpus, const LexiconSet& lexicons,
                           const std::set<FeatureGroup>& include_groups,
                           bool include_user_id = false);

enum class TargetKind { hate, liked, retweeted, replied };

const char* to_string(TargetKind kind);
TargetKind target_kind_from_string(const std::string& name);

// Per-tweet booleans aligned with build_matrix rows; liked/retweeted test
// count >= 1, replied uses the in-corpus reply count.
std::vector<bool> targets(const Corpus& corpus, TargetKind kind);

// Columns excluded when training for `kind` (num_replies leaks the replied
// target; is_hate_tweet is the label itself on the hate task).
std::vector<std::string> leaky_columns(TargetKind kind);

}  // namespace tweetlab

#endif
