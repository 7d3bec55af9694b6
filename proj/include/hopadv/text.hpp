#pragma once
// Low-level text utilities shared across the pipeline: case handling,
// whitespace normalization, a deterministic suffix-stripping stemmer,
// token-boundary matching and detokenization.

#include <string>
#include <string_view>
#include <vector>

namespace hopadv::text {

// ASCII-only case folding; non-ASCII bytes pass through untouched.
std::string lower(std::string_view s);

bool is_ascii_digit(char c);
bool is_ascii_alpha(char c);
bool is_ascii_alnum(char c);

// Collapses runs of whitespace to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view s);

std::string trim(std::string_view s);

// True if the string consists of digits with optional commas/periods
// and an optional leading sign, e.g. "808", "7,405", "90.4".
bool is_number_token(std::string_view s);

// Whitespace splitter (no offsets); for resource files and quick checks.
std::vector<std::string> split_ws(std::string_view s);

// Porter's suffix-stripping stemmer (the 1980 algorithm), lowercased
// input expected. Tokens with non-alphabetic characters are returned
// unchanged so that numbers and unit strings stem to themselves.
std::string porter_stem(std::string_view word);

// True when `needle` occurs in `haystack` delimited by non-alphanumeric
// characters on both sides (case-folded comparison).
bool contains_token_boundary(std::string_view haystack, std::string_view needle);

// Joins tokens with standard English spacing: no space before closing
// punctuation, none after opening brackets, apostrophes attach left.
std::string detokenize(const std::vector<std::string>& tokens);

// Uppercases the first alphabetic character.
std::string capitalize_first(std::string_view s);

bool starts_with_vowel_sound(std::string_view word);

}  // namespace hopadv::text
