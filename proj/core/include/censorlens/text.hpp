#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace censorlens::text {

/// Unicode NFC normalization. Invalid UTF-8 sequences are replaced with
/// U+FFFD, so the result is always valid UTF-8.
std::string normalize_nfc(std::string_view utf8);

/// Decodes UTF-8 into code points, substituting U+FFFD for invalid bytes.
std::vector<char32_t> decode_utf8(std::string_view utf8);

void append_utf8(std::string& out, char32_t cp);

/// Collapses runs of whitespace to one ASCII space, trims both ends and
/// lowercases ASCII letters. Non-ASCII text is left untouched.
std::string fold_ascii_whitespace_case(std::string_view s);

}  // namespace censorlens::text
