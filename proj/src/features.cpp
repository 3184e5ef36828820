#include "tweetlab/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tweetlab/text_util.hpp"

namespace tweetlab {

const char* to_string(FeatureGroup group) {
    switch (group) {
        case FeatureGroup::Tweet: return "tweet";
        case FeatureGroup::User: return "user";
        case FeatureGroup::Content: return "content";
    }
    return "?";
}

FeatureGroup feature_group_from_string(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "tweet") return FeatureGroup::Tweet;
    if (n == "user") return FeatureGroup::User;
    if (n == "content") return FeatureGroup::Content;
    throw ValidationError("unknown feature group '" + name + "' (expected tweet|user|content)");
}

namespace {

std::set<std::string> load_token_file(const std::string& path) {
    std::set<std::string> out;
    if (path.empty()) return out;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open lexicon file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_of(" \t") != std::string::npos) {
            throw ParseError(path + ": lexicon token contains whitespace: '" + line + "'");
        }
        out.insert(to_lower(line));
    }
    return out;
}

bool is_ascii_alpha(char32_t c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

}  // namespace

LexiconSet LexiconSet::load(const std::string& blacklist_path, const std::string& positive_path,
                            const std::string& negative_path, const std::string& subjective_path) {
    LexiconSet s;
    s.blacklist = load_token_file(blacklist_path);
    s.positive = load_token_file(positive_path);
    s.negative = load_token_file(negative_path);
    s.subjective = load_token_file(subjective_path);
    return s;
}

std::int64_t FeatureMatrix::column_of(const std::string& name) const {
    auto it = std::find(column_names.begin(), column_names.end(), name);
    return it == column_names.end() ? -1 : it - column_names.begin();
}

std::vector<double> FeatureMatrix::column(std::size_t j) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[j]);
    return out;
}

FeatureMatrix FeatureMatrix::select(const std::vector<std::size_t>& keep) const {
    FeatureMatrix out;
    for (std::size_t j : keep) {
        out.column_names.push_back(column_names[j]);
        out.column_groups.push_back(column_groups[j]);
    }
    out.rows.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> r;
        r.reserve(keep.size());
        for (std::size_t j : keep) r.push_back(row[j]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

std::vector<std::pair<std::string, double>> extract_tweet_features(const Corpus& corpus,
                                                                   std::size_t row) {
    const TweetRecord& t = corpus.tweets()[row];
    double age_hours =
        static_cast<double>(corpus.reference_time() - t.created_at) / 3600.0;
    double hour = static_cast<double>(((t.created_at % 86400) + 86400) % 86400) / 3600.0;
    bool is_reply = t.in_reply_to.has_value();
    bool reply_to_hate = false;
    if (t.in_reply_to) {
        const TweetRecord* parent = corpus.find_tweet(*t.in_reply_to);
        reply_to_hate = parent != nullptr && parent->labels.hate();
    }
    return {{"tweet_age", age_hours},
            {"tweet_hour", std::floor(hour)},
            {"is_quote_status", t.is_quote_status ? 1.0 : 0.0},
            {"is_reply", is_reply ? 1.0 : 0.0},
            {"is_reply_to_hate_tweet", reply_to_hate ? 1.0 : 0.0},
            {"num_replies", static_cast<double>(corpus.in_corpus_reply_count(row))}};
}

std::vector<std::pair<std::string, double>> extract_user_features(const UserRecord& user,
                                                                  std::int64_t reference_time) {
    double age_days = static_cast<double>(reference_time - user.created_at) / 86400.0;
    return {{"account_age", age_days},
            {"len_handle", static_cast<double>(utf8_length(user.handle))},
            {"len_name", static_cast<double>(utf8_length(user.display_name))},
            {"num_followers", static_cast<double>(user.follower_count)},
            {"num_followees", static_cast<double>(user.followee_count)},
            {"num_times_user_was_listed", static_cast<double>(user.listed_count)},
            {"num_posted_tweets", static_cast<double>(user.statuses_count)},
            {"num_favorited_tweets", static_cast<double>(user.favourites_count)}};
}

std::vector<std::pair<std::string, double>> extract_content_features(const TweetRecord& tweet,
                                                                     const LexiconSet& lexicons) {
    const std::string& text = tweet.text;
    auto tokens = whitespace_tokens(text);
    const double token_count = static_cast<double>(tokens.size());

    std::int64_t mentions = 0, hashtags = 0, urls = 0;
    std::int64_t upper = 0, lower = 0, mixed = 0;
    std::int64_t bl = 0, pos = 0, neg = 0, subj = 0;
    for (std::string_view tok : tokens) {
        if (tok.starts_with('@')) ++mentions;
        if (tok.starts_with('#')) ++hashtags;
        if (tok.starts_with("http://") || tok.starts_with("https://")) ++urls;

        std::u32string cps = utf8_decode(tok);
        std::int64_t alpha = 0, alpha_upper = 0, alpha_lower = 0;
        for (char32_t c : cps) {
            if (is_ascii_alpha(c)) {
                ++alpha;
                if (c <= 'Z') ++alpha_upper; else ++alpha_lower;
            }
        }
        if (alpha >= 2 && alpha == alpha_upper) {
            ++upper;  // needs >=2 letters so "I" and "A" do not count
        } else if (alpha >= 1 && alpha == alpha_lower) {
            ++lower;
        } else if (alpha >= 1) {
            ++mixed;
        }

        std::string norm = normalize_token(tok);
        if (!norm.empty()) {
            if (lexicons.blacklist.contains(norm)) ++bl;
            if (lexicons.positive.contains(norm)) ++pos;
            if (lexicons.negative.contains(norm)) ++neg;
            if (lexicons.subjective.contains(norm)) ++subj;
        }
    }

    bool has_digit = false;
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            has_digit = true;
            break;
        }
    }
    auto ratio = [&](std::int64_t n) {
        return token_count > 0 ? static_cast<double>(n) / token_count : 0.0;
    };

    return {{"is_hate_tweet", tweet.labels.hate() ? 1.0 : 0.0},
            {"has_mentions", mentions > 0 ? 1.0 : 0.0},
            {"num_mentions", static_cast<double>(mentions)},
            {"has_hashtags", hashtags > 0 ? 1.0 : 0.0},
            {"num_hashtags", static_cast<double>(hashtags)},
            {"has_urls", urls > 0 ? 1.0 : 0.0},
            {"num_urls", static_cast<double>(urls)},
            {"char_count", static_cast<double>(utf8_length(text))},
            {"token_count", token_count},
            {"has_digits", has_digit ? 1.0 : 0.0},
            {"has_questionmark", text.find('?') != std::string::npos ? 1.0 : 0.0},
            {"has_exclamationpoint", text.find('!') != std::string::npos ? 1.0 : 0.0},
            {"has_fullstop", text.find('.') != std::string::npos ? 1.0 : 0.0},
            {"has_uppercase_token", upper > 0 ? 1.0 : 0.0},
            {"uppercase_token_ratio", ratio(upper)},
            {"lowercase_token_ratio", ratio(lower)},
            {"mixedcase_token_ratio", ratio(mixed)},
            {"blacklist_total", static_cast<double>(bl)},
            {"blacklist_ratio", ratio(bl)},
            {"total_negative_tokens", static_cast<double>(neg)},
            {"negative_token_ratio", ratio(neg)},
            {"total_positive_tokens", static_cast<double>(pos)},
            {"positive_token_ratio", ratio(pos)},
            {"total_subjective_tokens", static_cast<double>(subj)},
            {"subjective_token_ratio", ratio(subj)}};
}

FeatureMatrix build_matrix(const Corpus& corpus, const LexiconSet& lexicons,
                           const std::set<FeatureGroup>& include_groups, bool include_user_id) {
    FeatureMatrix m;
    bool header_done = false;
    for (std::size_t i = 0; i < corpus.tweets().size(); ++i) {
        const TweetRecord& t = corpus.tweets()[i];
        std::vector<double> row;
        auto append = [&](FeatureGroup group,
                          const std::vector<std::pair<std::string, double>>& sub) {
            for (const auto& [name, value] : sub) {
                if (!header_done) {
                    m.column_names.push_back(name);
                    m.column_groups.push_back(group);
                }
                row.push_back(value);
            }
        };
        if (include_groups.contains(FeatureGroup::Tweet)) {
            append(FeatureGroup::Tweet, extract_tweet_features(corpus, i));
        }
        if (include_groups.contains(FeatureGroup::User)) {
            append(FeatureGroup::User,
                   extract_user_features(corpus.user(t.author_id), corpus.reference_time()));
            if (include_user_id) {
                append(FeatureGroup::User,
                       {{"user_id", static_cast<double>(t.author_id)}});
            }
        }
        if (include_groups.contains(FeatureGroup::Content)) {
            append(FeatureGroup::Content, extract_content_features(t, lexicons));
        }
        header_done = true;
        m.rows.push_back(std::move(row));
    }
    if (!header_done) {
        // Empty corpus still gets the full column header.
        TweetRecord dummy;
        UserRecord dummy_user;
        if (include_groups.contains(FeatureGroup::Tweet)) {
            Corpus one({[] {
                           TweetRecord t;
                           t.id = 1;
                           t.labels.none = true;
                           t.author_id = 1;
                           return t;
                       }()},
                       {{1, dummy_user}});
            for (const auto& [name, _] : extract_tweet_features(one, 0)) {
                m.column_names.push_back(name);
                m.column_groups.push_back(FeatureGroup::Tweet);
            }
        }
        if (include_groups.contains(FeatureGroup::User)) {
            for (const auto& [name, _] : extract_user_features(dummy_user, 0)) {
                m.column_names.push_back(name);
                m.column_groups.push_back(FeatureGroup::User);
            }
            if (include_user_id) {
                m.column_names.push_back("user_id");
                m.column_groups.push_back(FeatureGroup::User);
            }
        }
        if (include_groups.contains(FeatureGroup::Content)) {
            dummy.labels.none = true;
            for (const auto& [name, _] : extract_content_features(dummy, lexicons)) {
                m.column_names.push_back(name);
                m.column_groups.push_back(FeatureGroup::Content);
            }
        }
    }
    return m;
}

void FeatureMatrix::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t j = 0; j < column_names.size(); ++j) {
        if (j) out << ",";
        out << column_names[j];
    }
    out << "\n";
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ",";
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            out << buf;
        }
        out << "\n";
    }
}

const char* to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::hate: return "hate";
        case TargetKind::liked: return "liked";
        case TargetKind::retweeted: return "retweeted";
        case TargetKind::replied: return "replied";
    }
    return "?";
}

TargetKind target_kind_from_string(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "hate") return TargetKind::hate;
    if (n == "liked") return TargetKind::liked;
    if (n == "retweeted") return TargetKind::retweeted;
    if (n == "replied") return TargetKind::replied;
    throw ValidationError("unknown target '" + name + "' (expected hate|liked|retweeted|replied)");
}

std::vector<bool> targets(const Corpus& corpus, TargetKind kind) {
    std::vector<bool> out;
    out.reserve(corpus.tweets().size());
    for (std::size_t i = 0; i < corpus.tweets().size(); ++i) {
        const TweetRecord& t = corpus.tweets()[i];
        switch (kind) {
            case TargetKind::hate: out.push_back(t.labels.hate()); break;
            case TargetKind::liked: out.push_back(t.like_count >= 1); break;
            case TargetKind::retweeted: out.push_back(t.retweet_count >= 1); break;
            case TargetKind::replied: out.push_back(corpus.in_corpus_reply_count(i) >= 1); break;
        }
    }
    return out;
}

std::vector<std::string> leaky_columns(TargetKind kind) {
    switch (kind) {
        case TargetKind::hate: return {"is_hate_tweet"};
        case TargetKind::replied: return {"num_replies"};
        default: return {};
    }
}

}  // namespace tweetlab
