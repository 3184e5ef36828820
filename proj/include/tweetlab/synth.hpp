#ifndef TWEETLAB_SYNTH_HPP
#define TWEETLAB_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tweetlab/corpus.hpp"

namespace tweetlab {

// Deterministic test-fixture corpus: hate-class texts contain planted
// discriminative character sequences at `planted_rate`; interaction counts
// follow geometric distributions with per-class success parameters.
struct SynthSpec {
    std::int64_t n_non_hate = 1000;
    std::int64_t n_hate = 500;
    double racism_fraction = 0.3;        // of the hate tweets; the rest are sexism
    double planted_rate = 0.9;
    double skew_word_rate = 0.4;         // per-word chance of a hate-pool word in hate tweets
    std::vector<std::string> planted_tokens = {"xgrfz", "qzvnt", "wjqkx"};
    std::int64_t n_users = 60;
    double hate_user_fraction = 0.25;    // users that may author hate tweets

    // Geometric success probabilities; mean interactions = (1-p)/p.
    double like_p = 0.55;
    double retweet_p = 0.7;
    double reply_rate = 0.04;            // fraction of tweets that reply to an earlier tweet
    double hate_like_p = 0.8;
    double hate_retweet_p = 0.7;
    double hate_reply_rate = 0.01;
    double reply_retweet_p = 0.0;        // when > 0, overrides retweet_p for reply tweets

    void validate() const;
};

Corpus synth_corpus(const SynthSpec& spec, std::uint64_t seed);

}  // namespace tweetlab

#endif
