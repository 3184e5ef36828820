#ifndef TWEETLAB_CORPUS_HPP
#define TWEETLAB_CORPUS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tweetlab {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A tweet carries a non-empty set of labels; "none" cannot co-occur
// with a hate label.
struct LabelSet {
    bool none = false;
    bool racism = false;
    bool sexism = false;

    bool hate() const { return racism || sexism; }
    bool empty() const { return !none && !racism && !sexism; }
    bool operator==(const LabelSet&) const = default;
};

struct TweetRecord {
    std::uint64_t id = 0;
    std::string text;
    LabelSet labels;
    std::int64_t created_at = 0;  // epoch seconds, UTC
    std::int64_t like_count = 0;
    std::int64_t retweet_count = 0;
    std::optional<std::uint64_t> in_reply_to;
    bool is_quote_status = false;
    std::uint64_t author_id = 0;
};

struct UserRecord {
    std::uint64_t id = 0;
    std::string handle;
    std::string display_name;
    std::int64_t created_at = 0;
    std::int64_t follower_count = 0;
    std::int64_t followee_count = 0;
    std::int64_t listed_count = 0;
    std::int64_t statuses_count = 0;
    std::int64_t favourites_count = 0;
};

enum class Subset { all, hate, non_hate, racism, sexism };

enum class InteractionKind { likes, retweets, replies };

const char* to_string(Subset subset);
const char* to_string(InteractionKind kind);

// Immutable after construction; safe to share across readers.
class Corpus {
public:
    Corpus() = default;
    Corpus(std::vector<TweetRecord> tweets,
           std::unordered_map<std::uint64_t, UserRecord> users,
           std::optional<std::int64_t> reference_time = std::nullopt);

    const std::vector<TweetRecord>& tweets() const { return tweets_; }
    const std::unordered_map<std::uint64_t, UserRecord>& users() const { return users_; }
    std::int64_t reference_time() const { return reference_time_; }

    const UserRecord& user(std::uint64_t user_id) const;
    const TweetRecord* find_tweet(std::uint64_t tweet_id) const;

    // Number of corpus tweets whose in_reply_to is this row's tweet id.
    std::int64_t in_corpus_reply_count(std::size_t row) const { return reply_counts_[row]; }

    bool in_subset(std::size_t row, Subset subset) const;
    std::size_t subset_size(Subset subset) const;

private:
    std::vector<TweetRecord> tweets_;
    std::unordered_map<std::uint64_t, UserRecord> users_;
    std::unordered_map<std::uint64_t, std::size_t> row_of_;
    std::vector<std::int64_t> reply_counts_;
    std::int64_t reference_time_ = 0;
};

// Ordered by id so iteration (and everything downstream) is deterministic.
using AnnotationMap = std::map<std::uint64_t, LabelSet>;

// Annotation file: one `tweet_id<TAB>label` per line, '#' comments allowed,
// label in {none, racism, sexism} case-insensitively. Lines for the same id
// merge into a label set.
AnnotationMap load_annotations(const std::string& path);
AnnotationMap parse_annotations(const std::string& content, const std::string& origin);

struct CorpusLoadResult {
    Corpus corpus;
    std::vector<std::uint64_t> unavailable;         // annotated ids absent from the dump
    std::vector<std::string> record_errors;          // skipped records, with reasons
};

// Joins a hydrated JSON Lines dump with the annotation map. Tweets without
// an annotation are dropped; annotated ids missing from the dump are
// reported as unavailable. Zero loadable tweets is fatal.
CorpusLoadResult load_corpus(const AnnotationMap& annotations, const std::string& tweets_path,
                             std::optional<std::int64_t> reference_time = std::nullopt);

// Serializes tweets back to the hydrated JSON Lines schema (plus the
// annotation file); used by `synth` and `ingest`.
void write_tweets_jsonl(const Corpus& corpus, const std::string& path);
void write_annotations(const AnnotationMap& annotations, const std::string& path);
AnnotationMap annotations_of(const Corpus& corpus);

struct LabelDistribution {
    std::int64_t none = 0;
    std::int64_t hate = 0;     // tweets with >=1 hate label, dual-labeled count once
    std::int64_t racism = 0;
    std::int64_t sexism = 0;
    std::int64_t total = 0;
};

LabelDistribution label_distribution(const Corpus& corpus);

struct InteractionHistogram {
    InteractionKind kind = InteractionKind::likes;
    Subset subset = Subset::all;
    std::array<std::int64_t, 6> bins{};              // 0,1,2,3,4,5+
    std::vector<std::pair<std::int64_t, std::int64_t>> full;  // (count, tweets), uncapped
};

// Reply counts are in-corpus joins; like/retweet counts come from metadata.
InteractionHistogram interaction_histogram(const Corpus& corpus, InteractionKind kind,
                                           Subset subset);

std::int64_t interaction_count(const Corpus& corpus, std::size_t row, InteractionKind kind);

struct UserTypeTable {
    std::int64_t non_hate = 0;
    std::int64_t racist = 0;             // >=1 racism tweet, 0 sexism tweets
    std::int64_t sexist = 0;
    std::int64_t racist_and_sexist = 0;
    std::int64_t hate() const { return racist + sexist + racist_and_sexist; }
    std::int64_t total() const { return non_hate + hate(); }
};

UserTypeTable classify_users(const Corpus& corpus);

// Users with >=1 hate tweet, sorted by count descending, ties by id ascending.
std::vector<std::pair<std::uint64_t, std::int64_t>> user_production_histogram(const Corpus& corpus);

// Fraction of subset tweets containing at least one of the patterns as an
// exact whitespace-delimited token. Tokens are compared raw when
// case_sensitive, otherwise ASCII-lowercased on both sides.
double token_share(const Corpus& corpus, Subset subset, const std::vector<std::string>& patterns,
                   bool case_sensitive = true);

}  // namespace tweetlab

#endif
