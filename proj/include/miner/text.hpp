#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace miner {

/// Number of Unicode scalar values in a UTF-8 string. Invalid byte sequences
/// count one scalar per lead/stray byte, matching the replacement-character
/// count a lossy decode would produce.
std::uint64_t utf8_scalar_count(std::string_view s);

/// Replaces every invalid UTF-8 sequence with U+FFFD. Used for file paths,
/// which version control does not guarantee to be valid UTF-8.
std::string utf8_sanitize(std::string_view s);

std::string base64_encode(std::string_view data);

/// Strict decode: rejects characters outside the alphabet and bad padding.
std::optional<std::string> base64_decode(std::string_view text);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace miner
