#include "wesma/unicode.hpp"

#include <algorithm>
#include <array>

namespace wesma {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Composition {
    char32_t base;
    char32_t mark;
    char32_t composed;
};

// Latin-1 / Latin Extended-A precomposed forms reachable from a single
// base + combining mark. 0x300 grave, 0x301 acute, 0x302 circumflex,
// 0x303 tilde, 0x308 diaeresis, 0x327 cedilla.
constexpr std::array<Composition, 58> kCompositions = {{
    {U'a', 0x300, 0x00E0}, {U'a', 0x301, 0x00E1}, {U'a', 0x302, 0x00E2},
    {U'a', 0x303, 0x00E3}, {U'a', 0x308, 0x00E4},
    {U'e', 0x300, 0x00E8}, {U'e', 0x301, 0x00E9}, {U'e', 0x302, 0x00EA},
    {U'e', 0x308, 0x00EB},
    {U'i', 0x300, 0x00EC}, {U'i', 0x301, 0x00ED}, {U'i', 0x302, 0x00EE},
    {U'i', 0x308, 0x00EF},
    {U'o', 0x300, 0x00F2}, {U'o', 0x301, 0x00F3}, {U'o', 0x302, 0x00F4},
    {U'o', 0x303, 0x00F5}, {U'o', 0x308, 0x00F6},
    {U'u', 0x300, 0x00F9}, {U'u', 0x301, 0x00FA}, {U'u', 0x302, 0x00FB},
    {U'u', 0x308, 0x00FC},
    {U'c', 0x327, 0x00E7}, {U'n', 0x303, 0x00F1},
    {U'y', 0x301, 0x00FD}, {U'y', 0x308, 0x00FF},
    {U'A', 0x300, 0x00C0}, {U'A', 0x301, 0x00C1}, {U'A', 0x302, 0x00C2},
    {U'A', 0x303, 0x00C3}, {U'A', 0x308, 0x00C4},
    {U'E', 0x300, 0x00C8}, {U'E', 0x301, 0x00C9}, {U'E', 0x302, 0x00CA},
    {U'E', 0x308, 0x00CB},
    {U'I', 0x300, 0x00CC}, {U'I', 0x301, 0x00CD}, {U'I', 0x302, 0x00CE},
    {U'I', 0x308, 0x00CF},
    {U'O', 0x300, 0x00D2}, {U'O', 0x301, 0x00D3}, {U'O', 0x302, 0x00D4},
    {U'O', 0x303, 0x00D5}, {U'O', 0x308, 0x00D6},
    {U'U', 0x300, 0x00D9}, {U'U', 0x301, 0x00DA}, {U'U', 0x302, 0x00DB},
    {U'U', 0x308, 0x00DC},
    {U'C', 0x327, 0x00C7}, {U'N', 0x303, 0x00D1},
    {U'Y', 0x301, 0x00DD},
    {U'w', 0x302, 0x0175}, {U'W', 0x302, 0x0174},
    {U's', 0x301, 0x015B}, {U'S', 0x301, 0x015A},
    {U'g', 0x306, 0x011F}, {U'G', 0x306, 0x011E},
    {U'o', 0x30B, 0x0151},
}};

bool in_range(char32_t c, char32_t lo, char32_t hi) {
    return c >= lo && c <= hi;
}

} // namespace

std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b0 = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        // Reject overlong forms and surrogate range.
        if (!ok || (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode(std::span<const char32_t> cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

char32_t fold_case(char32_t c) {
    if (c >= U'A' && c <= U'Z') {
        return c + 0x20;
    }
    // Latin-1 uppercase block, skipping the multiplication sign.
    if (in_range(c, 0x00C0, 0x00DE) && c != 0x00D7) {
        return c + 0x20;
    }
    // Latin Extended-A comes in mostly-regular case pairs.
    if (in_range(c, 0x0100, 0x012F) || in_range(c, 0x0132, 0x0137) ||
        in_range(c, 0x014A, 0x0177)) {
        return (c % 2 == 0) ? c + 1 : c;
    }
    if (in_range(c, 0x0139, 0x0148) || in_range(c, 0x0179, 0x017E)) {
        return (c % 2 == 1) ? c + 1 : c;
    }
    if (c == 0x0178) {
        return 0x00FF; // Y with diaeresis
    }
    if (c == 0x017F) {
        return U's'; // long s
    }
    if (in_range(c, 0x0391, 0x03A9) && c != 0x03A2) {
        return c + 0x20;
    }
    if (in_range(c, 0x0410, 0x042F)) {
        return c + 0x20;
    }
    if (in_range(c, 0x0400, 0x040F)) {
        return c + 0x50;
    }
    return c;
}

bool is_letter(char32_t c) {
    if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) {
        return true;
    }
    if (in_range(c, 0x00C0, 0x024F) && c != 0x00D7 && c != 0x00F7) {
        return true;
    }
    if (in_range(c, 0x0386, 0x03FF) && c != 0x03A2 && c != 0x0387) {
        return true;
    }
    if (in_range(c, 0x0400, 0x04FF)) {
        return true;
    }
    // Devanagari independent letters.
    if (in_range(c, 0x0904, 0x0939) || in_range(c, 0x0958, 0x0961) ||
        in_range(c, 0x0971, 0x097F) || c == 0x0950) {
        return true;
    }
    // Tamil letters (the block is sparse; ranges cover the assigned letters).
    if (in_range(c, 0x0B85, 0x0B8A) || in_range(c, 0x0B8E, 0x0B90) ||
        in_range(c, 0x0B92, 0x0B95) || in_range(c, 0x0B99, 0x0B9A) ||
        c == 0x0B9C || in_range(c, 0x0B9E, 0x0B9F) || in_range(c, 0x0BA3, 0x0BA4) ||
        in_range(c, 0x0BA8, 0x0BAA) || in_range(c, 0x0BAE, 0x0BB9) || c == 0x0BD0) {
        return true;
    }
    return false;
}

bool is_digit_char(char32_t c) {
    return (c >= U'0' && c <= U'9') || in_range(c, 0x0966, 0x096F) ||
           in_range(c, 0x0BE6, 0x0BEF);
}

bool is_combining_mark(char32_t c) {
    if (in_range(c, 0x0300, 0x036F)) {
        return true;
    }
    // Devanagari signs, vowel signs, virama.
    if (in_range(c, 0x0900, 0x0903) || in_range(c, 0x093A, 0x094F) ||
        in_range(c, 0x0951, 0x0957) || in_range(c, 0x0962, 0x0963)) {
        return true;
    }
    // Tamil vowel signs, virama, length mark.
    if (in_range(c, 0x0B82, 0x0B83) || in_range(c, 0x0BBE, 0x0BC2) ||
        in_range(c, 0x0BC6, 0x0BC8) || in_range(c, 0x0BCA, 0x0BCD) || c == 0x0BD7) {
        return true;
    }
    return false;
}

bool is_space_char(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == 0x0B ||
           c == 0x0C || c == 0x00A0 || in_range(c, 0x2000, 0x200A) || c == 0x2028 ||
           c == 0x2029 || c == 0x3000;
}

bool is_control_char(char32_t c) {
    return (c < 0x20) || c == 0x7F || in_range(c, 0x80, 0x9F) || c == 0x200B ||
           c == 0x200C || c == 0x200D || c == 0xFEFF;
}

void compose_canonical(std::vector<char32_t>& cps) {
    std::size_t write = 0;
    std::size_t read = 0;
    while (read < cps.size()) {
        char32_t cur = cps[read];
        std::size_t next = read + 1;
        bool merged = true;
        while (merged && next < cps.size()) {
            merged = false;
            for (const Composition& entry : kCompositions) {
                if (entry.base == cur && entry.mark == cps[next]) {
                    cur = entry.composed;
                    ++next;
                    merged = true;
                    break;
                }
            }
        }
        cps[write++] = cur;
        read = next;
    }
    cps.resize(write);
}

} // namespace wesma
