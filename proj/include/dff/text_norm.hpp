#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dff {

// Whole-word replacements (abbreviations, respelled anglicisms), matched
// case-insensitively.
using Lexicon = std::map<std::string, std::string>;

inline constexpr std::uint32_t kMaxCardinal = 999'999;

// German cardinal words for 0..999999 ("eins" standalone, "ein" in compounds,
// "einhundert", "eintausend").
std::string german_cardinal(std::uint32_t value);

// Transcript charset: a-z, ä, ö, ü, ß, space and . , ! ? ; : - '
bool in_charset(char32_t cp);
bool is_charset_clean(std::string_view utf8);

// Lexicon replacement, integer expansion, lowercasing, charset filtering and
// whitespace collapsing, in that order. Decimals and digit groups such as
// "3,5" or "1.000" are deleted and reported through `warnings`.
std::string normalize_text(std::string_view text, const Lexicon& lexicon,
                           std::vector<std::string>* warnings = nullptr);

}  // namespace dff
