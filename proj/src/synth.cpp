#include "tweetlab/synth.hpp"

#include <algorithm>
#include <random>

namespace tweetlab {

namespace {

constexpr std::int64_t kEpoch2016 = 1451606400;  // 2016-01-01T00:00:00Z

const char* kFillerWords[] = {"the",  "a",    "of",   "to",   "and", "in",  "show", "today",
                              "great", "this", "that", "with", "for", "you", "new",  "time",
                              "people", "day", "good", "see",  "like", "about", "just", "one"};

// Class-leaning word pool; hate tweets mix these in so that even tweets
// without a planted token carry some signal.
const char* kSkewWords[] = {"zorv", "prink", "gavot", "lurnt", "mirv", "quost"};

std::string random_word(std::mt19937_64& rng, double skew_rate) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (skew_rate > 0.0 && unit(rng) < skew_rate) {
        std::uniform_int_distribution<std::size_t> pick(0, std::size(kSkewWords) - 1);
        return kSkewWords[pick(rng)];
    }
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kFillerWords) - 1);
    return kFillerWords[pick(rng)];
}

std::int64_t geometric(std::mt19937_64& rng, double p) {
    // Number of failures before first success; p = 1 collapses to 0.
    if (p >= 1.0) return 0;
    std::geometric_distribution<std::int64_t> dist(p);
    return dist(rng);
}

}  // namespace

void SynthSpec::validate() const {
    if (n_non_hate < 0 || n_hate < 0) throw ValidationError("synth: negative class size");
    for (double rate : {racism_fraction, planted_rate, skew_word_rate, reply_rate,
                        hate_reply_rate, hate_user_fraction}) {
        if (rate < 0.0 || rate > 1.0) throw ValidationError("synth: rate outside [0,1]");
    }
    for (double p : {like_p, retweet_p, hate_like_p, hate_retweet_p}) {
        if (p <= 0.0 || p > 1.0) throw ValidationError("synth: geometric parameter outside (0,1]");
    }
    if (reply_retweet_p < 0.0 || reply_retweet_p > 1.0) {
        throw ValidationError("synth: reply_retweet_p outside [0,1]");
    }
    if (n_users < 1 && n_non_hate + n_hate > 0) throw ValidationError("synth: need users");
    if (planted_tokens.empty()) throw ValidationError("synth: no planted tokens");
}

Corpus synth_corpus(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);

    const std::int64_t total = spec.n_non_hate + spec.n_hate;
    if (total == 0) return Corpus({}, {});

    std::unordered_map<std::uint64_t, UserRecord> users;
    std::int64_t n_hate_users =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(spec.n_users * spec.hate_user_fraction));
    std::uniform_int_distribution<std::int64_t> follower_dist(0, 5000);
    std::uniform_int_distribution<std::int64_t> small_dist(0, 400);
    for (std::int64_t u = 1; u <= spec.n_users; ++u) {
        UserRecord rec;
        rec.id = static_cast<std::uint64_t>(u);
        rec.handle = "user" + std::to_string(u);
        rec.display_name = "User " + std::to_string(u);
        rec.created_at = kEpoch2016 - small_dist(rng) * 86400;
        rec.follower_count = follower_dist(rng);
        rec.followee_count = follower_dist(rng);
        rec.listed_count = small_dist(rng) / 10;
        rec.statuses_count = follower_dist(rng);
        rec.favourites_count = follower_dist(rng);
        users.emplace(rec.id, rec);
    }

    std::vector<TweetRecord> tweets;
    tweets.reserve(total);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> planted_pick(0, spec.planted_tokens.size() - 1);
    std::uniform_int_distribution<int> n_words(4, 9);
    std::uniform_int_distribution<std::int64_t> minute(0, 60 * 24 * 120);

    std::int64_t n_racism = static_cast<std::int64_t>(spec.n_hate * spec.racism_fraction);
    for (std::int64_t i = 0; i < total; ++i) {
        bool hate = i >= spec.n_non_hate;
        TweetRecord t;
        t.id = static_cast<std::uint64_t>(1000 + i);
        if (hate) {
            std::int64_t h = i - spec.n_non_hate;
            if (h < n_racism) t.labels.racism = true; else t.labels.sexism = true;
        } else {
            t.labels.none = true;
        }
        // Hate tweets come from the hate-user block, the rest from anyone.
        std::uint64_t author;
        if (hate) {
            author = 1 + static_cast<std::uint64_t>(
                            std::uniform_int_distribution<std::int64_t>(0, n_hate_users - 1)(rng));
        } else {
            author = 1 + static_cast<std::uint64_t>(
                            std::uniform_int_distribution<std::int64_t>(0, spec.n_users - 1)(rng));
        }
        t.author_id = author;
        t.created_at = kEpoch2016 + minute(rng) * 60;

        int words = n_words(rng);
        std::string text;
        for (int w = 0; w < words; ++w) {
            if (!text.empty()) text += ' ';
            text += random_word(rng, hate ? spec.skew_word_rate : 0.0);
        }
        if (hate && unit(rng) < spec.planted_rate) {
            text += ' ';
            text += spec.planted_tokens[planted_pick(rng)];
        }
        t.text = text;

        t.like_count = geometric(rng, hate ? spec.hate_like_p : spec.like_p);
        double rr = hate ? spec.hate_reply_rate : spec.reply_rate;
        if (i > 0 && unit(rng) < rr) {
            std::uniform_int_distribution<std::int64_t> parent(0, i - 1);
            t.in_reply_to = static_cast<std::uint64_t>(1000 + parent(rng));
        }
        double rt_p = hate ? spec.hate_retweet_p : spec.retweet_p;
        if (t.in_reply_to && spec.reply_retweet_p > 0.0) rt_p = spec.reply_retweet_p;
        t.retweet_count = geometric(rng, rt_p);
        tweets.push_back(std::move(t));
    }
    std::sort(tweets.begin(), tweets.end(),
              [](const TweetRecord& a, const TweetRecord& b) { return a.id < b.id; });
    return Corpus(std::move(tweets), std::move(users));
}

}  // namespace tweetlab
