#include "tweetlab/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "tweetlab/text_util.hpp"
#include "json.hpp"

namespace tweetlab {

using nlohmann::json;

const char* to_string(Subset subset) {
    switch (subset) {
        case Subset::all: return "all";
        case Subset::hate: return "hate";
        case Subset::non_hate: return "non-hate";
        case Subset::racism: return "racism";
        case Subset::sexism: return "sexism";
    }
    return "?";
}

const char* to_string(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::likes: return "likes";
        case InteractionKind::retweets: return "retweets";
        case InteractionKind::replies: return "replies";
    }
    return "?";
}

Corpus::Corpus(std::vector<TweetRecord> tweets,
               std::unordered_map<std::uint64_t, UserRecord> users,
               std::optional<std::int64_t> reference_time)
    : tweets_(std::move(tweets)), users_(std::move(users)) {
    row_of_.reserve(tweets_.size());
    std::int64_t max_created = 0;
    for (std::size_t i = 0; i < tweets_.size(); ++i) {
        const TweetRecord& t = tweets_[i];
        if (t.labels.empty()) {
            throw ValidationError("tweet " + std::to_string(t.id) + " has no labels");
        }
        if (t.labels.none && t.labels.hate()) {
            throw ValidationError("tweet " + std::to_string(t.id) +
                                  " labeled both none and hate");
        }
        if (!users_.contains(t.author_id)) {
            throw ValidationError("tweet " + std::to_string(t.id) + " has unknown author " +
                                  std::to_string(t.author_id));
        }
        if (!row_of_.emplace(t.id, i).second) {
            throw ValidationError("duplicate tweet id " + std::to_string(t.id));
        }
        max_created = std::max(max_created, t.created_at);
    }
    reference_time_ = reference_time.value_or(max_created);
    reply_counts_.assign(tweets_.size(), 0);
    for (const TweetRecord& t : tweets_) {
        if (t.in_reply_to) {
            auto it = row_of_.find(*t.in_reply_to);
            if (it != row_of_.end()) ++reply_counts_[it->second];
        }
    }
}

const UserRecord& Corpus::user(std::uint64_t user_id) const {
    auto it = users_.find(user_id);
    if (it == users_.end()) {
        throw ValidationError("unknown user id " + std::to_string(user_id));
    }
    return it->second;
}

const TweetRecord* Corpus::find_tweet(std::uint64_t tweet_id) const {
    auto it = row_of_.find(tweet_id);
    return it == row_of_.end() ? nullptr : &tweets_[it->second];
}

bool Corpus::in_subset(std::size_t row, Subset subset) const {
    const LabelSet& l = tweets_[row].labels;
    switch (subset) {
        case Subset::all: return true;
        case Subset::hate: return l.hate();
        case Subset::non_hate: return !l.hate();
        case Subset::racism: return l.racism;
        case Subset::sexism: return l.sexism;
    }
    return false;
}

std::size_t Corpus::subset_size(Subset subset) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < tweets_.size(); ++i) {
        if (in_subset(i, subset)) ++n;
    }
    return n;
}

AnnotationMap parse_annotations(const std::string& content, const std::string& origin) {
    AnnotationMap out;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(origin + ":" + std::to_string(line_no) +
                             ": expected `tweet_id<TAB>label`");
        }
        std::uint64_t id = 0;
        try {
            std::size_t used = 0;
            id = std::stoull(line.substr(0, tab), &used);
            if (used != tab) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": bad tweet id '" +
                             line.substr(0, tab) + "'");
        }
        std::string label = to_lower(line.substr(tab + 1));
        LabelSet& set = out[id];
        if (label == "none") {
            set.none = true;
        } else if (label == "racism") {
            set.racism = true;
        } else if (label == "sexism") {
            set.sexism = true;
        } else {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": unknown label '" +
                             label + "'");
        }
        if (set.none && set.hate()) {
            throw ValidationError(origin + ":" + std::to_string(line_no) + ": tweet " +
                                  std::to_string(id) + " labeled both none and a hate label");
        }
    }
    return out;
}

AnnotationMap load_annotations(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open annotation file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_annotations(buf.str(), path);
}

namespace {

std::int64_t require_count(const json& obj, const char* field, const std::string& ctx) {
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) {
        throw ParseError(ctx + ": missing field '" + std::string(field) + "'");
    }
    std::int64_t v = it->get<std::int64_t>();
    if (v < 0) throw ParseError(ctx + ": negative count in '" + std::string(field) + "'");
    return v;
}

std::int64_t require_time(const json& obj, const char* field, const std::string& ctx) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) {
        throw ParseError(ctx + ": missing timestamp '" + std::string(field) + "'");
    }
    return parse_iso8601_utc(it->get<std::string>());
}

TweetRecord parse_tweet_line(const json& obj, UserRecord& user_out) {
    if (!obj.contains("id")) throw ParseError("record has no id");
    TweetRecord t;
    t.id = obj.at("id").get<std::uint64_t>();
    const std::string ctx = "tweet " + std::to_string(t.id);
    if (!obj.contains("text") || !obj.at("text").is_string()) {
        throw ParseError(ctx + ": missing field 'text'");
    }
    t.text = obj.at("text").get<std::string>();
    t.created_at = require_time(obj, "created_at", ctx);
    t.like_count = require_count(obj, "favorite_count", ctx);
    t.retweet_count = require_count(obj, "retweet_count", ctx);
    if (obj.contains("in_reply_to_status_id") && !obj.at("in_reply_to_status_id").is_null()) {
        t.in_reply_to = obj.at("in_reply_to_status_id").get<std::uint64_t>();
    }
    t.is_quote_status = obj.value("is_quote_status", false);
    auto uit = obj.find("user");
    if (uit == obj.end() || !uit->is_object()) {
        throw ParseError(ctx + ": missing 'user' object");
    }
    const json& u = *uit;
    const std::string uctx = ctx + " user";
    user_out.id = u.at("id").get<std::uint64_t>();
    user_out.handle = u.value("screen_name", "");
    user_out.display_name = u.value("name", "");
    user_out.created_at = require_time(u, "created_at", uctx);
    user_out.follower_count = require_count(u, "followers_count", uctx);
    user_out.followee_count = require_count(u, "friends_count", uctx);
    user_out.listed_count = require_count(u, "listed_count", uctx);
    user_out.statuses_count = require_count(u, "statuses_count", uctx);
    user_out.favourites_count = require_count(u, "favourites_count", uctx);
    t.author_id = user_out.id;
    return t;
}

}  // namespace

CorpusLoadResult load_corpus(const AnnotationMap& annotations, const std::string& tweets_path,
                             std::optional<std::int64_t> reference_time) {
    std::ifstream in(tweets_path, std::ios::binary);
    if (!in) throw ParseError("cannot open tweet file: " + tweets_path);

    CorpusLoadResult result;
    std::vector<TweetRecord> tweets;
    std::unordered_map<std::uint64_t, UserRecord> users;
    std::map<std::uint64_t, bool> seen;  // annotated id -> loaded
    for (const auto& [id, _] : annotations) seen[id] = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            json obj = json::parse(line);
            UserRecord user;
            TweetRecord t = parse_tweet_line(obj, user);
            auto ann = annotations.find(t.id);
            if (ann == annotations.end()) continue;  // unannotated: not part of this corpus
            t.labels = ann->second;
            tweets.push_back(std::move(t));
            users.insert_or_assign(user.id, user);
            seen[ann->first] = true;
        } catch (const std::exception& e) {
            result.record_errors.push_back(tweets_path + ":" + std::to_string(line_no) + ": " +
                                           e.what());
        }
    }
    for (const auto& [id, loaded] : seen) {
        if (!loaded) result.unavailable.push_back(id);
    }
    if (tweets.empty()) {
        throw ValidationError("no loadable annotated tweets in " + tweets_path);
    }
    std::sort(tweets.begin(), tweets.end(),
              [](const TweetRecord& a, const TweetRecord& b) { return a.id < b.id; });
    result.corpus = Corpus(std::move(tweets), std::move(users), reference_time);
    return result;
}

void write_tweets_jsonl(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const TweetRecord& t : corpus.tweets()) {
        const UserRecord& u = corpus.user(t.author_id);
        json obj;
        obj["id"] = t.id;
        obj["text"] = t.text;
        obj["created_at"] = format_iso8601_utc(t.created_at);
        obj["favorite_count"] = t.like_count;
        obj["retweet_count"] = t.retweet_count;
        if (t.in_reply_to) {
            obj["in_reply_to_status_id"] = *t.in_reply_to;
        } else {
            obj["in_reply_to_status_id"] = nullptr;
        }
        obj["is_quote_status"] = t.is_quote_status;
        obj["user"] = {{"id", u.id},
                       {"screen_name", u.handle},
                       {"name", u.display_name},
                       {"created_at", format_iso8601_utc(u.created_at)},
                       {"followers_count", u.follower_count},
                       {"friends_count", u.followee_count},
                       {"listed_count", u.listed_count},
                       {"statuses_count", u.statuses_count},
                       {"favourites_count", u.favourites_count}};
        out << obj.dump() << "\n";
    }
}

void write_annotations(const AnnotationMap& annotations, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& [id, labels] : annotations) {
        if (labels.none) out << id << "\tnone\n";
        if (labels.racism) out << id << "\tracism\n";
        if (labels.sexism) out << id << "\tsexism\n";
    }
}

AnnotationMap annotations_of(const Corpus& corpus) {
    AnnotationMap out;
    for (const TweetRecord& t : corpus.tweets()) out[t.id] = t.labels;
    return out;
}

LabelDistribution label_distribution(const Corpus& corpus) {
    LabelDistribution d;
    for (const TweetRecord& t : corpus.tweets()) {
        ++d.total;
        if (t.labels.none) ++d.none;
        if (t.labels.racism) ++d.racism;
        if (t.labels.sexism) ++d.sexism;
        if (t.labels.hate()) ++d.hate;
    }
    return d;
}

std::int64_t interaction_count(const Corpus& corpus, std::size_t row, InteractionKind kind) {
    switch (kind) {
        case InteractionKind::likes: return corpus.tweets()[row].like_count;
        case InteractionKind::retweets: return corpus.tweets()[row].retweet_count;
        case InteractionKind::replies: return corpus.in_corpus_reply_count(row);
    }
    return 0;
}

InteractionHistogram interaction_histogram(const Corpus& corpus, InteractionKind kind,
                                           Subset subset) {
    InteractionHistogram h;
    h.kind = kind;
    h.subset = subset;
    std::map<std::int64_t, std::int64_t> full;
    for (std::size_t i = 0; i < corpus.tweets().size(); ++i) {
        if (!corpus.in_subset(i, subset)) continue;
        std::int64_t c = interaction_count(corpus, i, kind);
        ++h.bins[static_cast<std::size_t>(std::min<std::int64_t>(c, 5))];
        ++full[c];
    }
    h.full.assign(full.begin(), full.end());
    return h;
}

UserTypeTable classify_users(const Corpus& corpus) {
    std::unordered_map<std::uint64_t, std::pair<bool, bool>> produced;  // racism, sexism
    for (const auto& [id, _] : corpus.users()) produced[id];
    for (const TweetRecord& t : corpus.tweets()) {
        auto& p = produced[t.author_id];
        p.first |= t.labels.racism;
        p.second |= t.labels.sexism;
    }
    UserTypeTable table;
    for (const auto& [_, p] : produced) {
        if (p.first && p.second) {
            ++table.racist_and_sexist;
        } else if (p.first) {
            ++table.racist;
        } else if (p.second) {
            ++table.sexist;
        } else {
            ++table.non_hate;
        }
    }
    return table;
}

std::vector<std::pair<std::uint64_t, std::int64_t>> user_production_histogram(
    const Corpus& corpus) {
    std::map<std::uint64_t, std::int64_t> counts;
    for (const TweetRecord& t : corpus.tweets()) {
        if (t.labels.hate()) ++counts[t.author_id];
    }
    std::vector<std::pair<std::uint64_t, std::int64_t>> out(counts.begin(), counts.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

double token_share(const Corpus& corpus, Subset subset, const std::vector<std::string>& patterns,
                   bool case_sensitive) {
    std::vector<std::string> wanted;
    wanted.reserve(patterns.size());
    for (const std::string& p : patterns) {
        wanted.push_back(case_sensitive ? p : to_lower(p));
    }
    std::int64_t matching = 0;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < corpus.tweets().size(); ++i) {
        if (!corpus.in_subset(i, subset)) continue;
        ++total;
        bool hit = false;
        for (std::string_view tok : whitespace_tokens(corpus.tweets()[i].text)) {
            std::string cand = case_sensitive ? std::string(tok) : to_lower(tok);
            if (std::find(wanted.begin(), wanted.end(), cand) != wanted.end()) {
                hit = true;
                break;
            }
        }
        if (hit) ++matching;
    }
    return total == 0 ? 0.0 : static_cast<double>(matching) / static_cast<double>(total);
}

}  // namespace tweetlab
