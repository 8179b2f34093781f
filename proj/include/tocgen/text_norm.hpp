#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tocgen {

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

/// Standardizes punctuation (curly quotes -> ' / ", dashes -> -, ellipsis
/// -> ...), collapses whitespace runs to single spaces and trims. Idempotent.
std::string normalize_text(std::string_view s);

/// Canonical form for title comparison shared by template matching, metrics
/// and gold-label alignment: normalize_text, lowercase, punctuation replaced
/// by spaces, whitespace collapsed.
std::string normalize_title(std::string_view s);

/// Whitespace tokens of normalize_title(s).
std::vector<std::string> tokenize_title(std::string_view s);

/// At least one letter and no lowercase letters.
bool is_all_caps_text(std::string_view s);

char32_t to_lower_cp(char32_t cp);
bool is_letter_cp(char32_t cp);

}  // namespace tocgen
