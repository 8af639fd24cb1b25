#include "miner/text.hpp"

#include <array>
#include <cctype>

namespace miner {

namespace {

// Returns the length of the valid UTF-8 sequence starting at s[i], or 0 if
// the bytes there do not form one (overlong forms and surrogates rejected).
std::size_t valid_sequence_length(std::string_view s, std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return 1;
    std::size_t len;
    std::uint32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr std::uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF) return 0;
    if (cp >= 0xD800 && cp <= 0xDFFF) return 0;
    return len;
}

}  // namespace

std::uint64_t utf8_scalar_count(std::string_view s) {
    std::uint64_t n = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t len = valid_sequence_length(s, i);
        i += len == 0 ? 1 : len;
        ++n;
    }
    return n;
}

std::string utf8_sanitize(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t len = valid_sequence_length(s, i);
        if (len == 0) {
            out += "\xEF\xBF\xBD";  // U+FFFD
            ++i;
        } else {
            out.append(s.substr(i, len));
            i += len;
        }
    }
    return out;
}

namespace {

constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::array<int, 256> make_b64_inverse() {
    std::array<int, 256> inv{};
    inv.fill(-1);
    for (int i = 0; i < 64; ++i) inv[static_cast<unsigned char>(kB64Alphabet[i])] = i;
    return inv;
}

}  // namespace

std::string base64_encode(std::string_view data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        std::uint32_t v = static_cast<unsigned char>(data[i]) << 16 |
                          static_cast<unsigned char>(data[i + 1]) << 8 |
                          static_cast<unsigned char>(data[i + 2]);
        out += kB64Alphabet[v >> 18];
        out += kB64Alphabet[(v >> 12) & 0x3F];
        out += kB64Alphabet[(v >> 6) & 0x3F];
        out += kB64Alphabet[v & 0x3F];
    }
    const std::size_t rest = data.size() - i;
    if (rest == 1) {
        std::uint32_t v = static_cast<unsigned char>(data[i]) << 16;
        out += kB64Alphabet[v >> 18];
        out += kB64Alphabet[(v >> 12) & 0x3F];
        out += "==";
    } else if (rest == 2) {
        std::uint32_t v = static_cast<unsigned char>(data[i]) << 16 |
                          static_cast<unsigned char>(data[i + 1]) << 8;
        out += kB64Alphabet[v >> 18];
        out += kB64Alphabet[(v >> 12) & 0x3F];
        out += kB64Alphabet[(v >> 6) & 0x3F];
        out += '=';
    }
    return out;
}

std::optional<std::string> base64_decode(std::string_view text) {
    static const std::array<int, 256> inv = make_b64_inverse();
    if (text.size() % 4 != 0) return std::nullopt;
    std::string out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        std::uint32_t v = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const char c = text[i + k];
            if (c == '=') {
                // '=' only allowed in the last two positions of the final group
                if (i + 4 != text.size() || k < 2) return std::nullopt;
                ++pad;
                v <<= 6;
            } else {
                if (pad > 0) return std::nullopt;
                const int d = inv[static_cast<unsigned char>(c)];
                if (d < 0) return std::nullopt;
                v = v << 6 | static_cast<std::uint32_t>(d);
            }
        }
        out += static_cast<char>(v >> 16 & 0xFF);
        if (pad < 2) out += static_cast<char>(v >> 8 & 0xFF);
        if (pad < 1) out += static_cast<char>(v & 0xFF);
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace miner
