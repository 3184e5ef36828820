#ifndef TWEETLAB_TEXT_UTIL_HPP
#define TWEETLAB_TEXT_UTIL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tweetlab {

// Decodes UTF-8 into code points. Invalid bytes are passed through as
// U+FFFD so that malformed tweets never abort a run.
std::u32string utf8_decode(std::string_view text);

std::string utf8_encode(std::u32string_view code_points);

// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

// ASCII-only lowercasing for code points outside ASCII is identity;
// tweets are mostly ASCII and this keeps behaviour locale-independent.
std::string to_lower(std::string_view text);

// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string_view> whitespace_tokens(std::string_view text);

// Strips leading '@'/'#' and trailing ASCII punctuation, then lowercases.
// Used to match tweet tokens against lexicon entries.
std::string normalize_token(std::string_view token);

// Parses an ISO-8601 UTC timestamp ("2016-01-02T10:20:30Z", the 'T' may
// be a space, fractional seconds ignored) to seconds since the epoch.
// Throws std::invalid_argument on malformed input.
std::int64_t parse_iso8601_utc(std::string_view text);

std::string format_iso8601_utc(std::int64_t epoch_seconds);

}  // namespace tweetlab

#endif
