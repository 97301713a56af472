#include "citescan/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <unordered_map>

namespace citescan {

namespace {

// Folding table for the Latin-1 supplement and the common Latin Extended-A
// letters. Anything non-ASCII outside the table is treated as punctuation.
const std::unordered_map<std::uint32_t, const char*>& fold_table() {
    static const std::unordered_map<std::uint32_t, const char*> table = {
        {0xC0, "a"}, {0xC1, "a"}, {0xC2, "a"}, {0xC3, "a"}, {0xC4, "a"}, {0xC5, "a"},
        {0xC6, "ae"}, {0xC7, "c"}, {0xC8, "e"}, {0xC9, "e"}, {0xCA, "e"}, {0xCB, "e"},
        {0xCC, "i"}, {0xCD, "i"}, {0xCE, "i"}, {0xCF, "i"}, {0xD0, "d"}, {0xD1, "n"},
        {0xD2, "o"}, {0xD3, "o"}, {0xD4, "o"}, {0xD5, "o"}, {0xD6, "o"}, {0xD8, "o"},
        {0xD9, "u"}, {0xDA, "u"}, {0xDB, "u"}, {0xDC, "u"}, {0xDD, "y"}, {0xDE, "th"},
        {0xDF, "ss"},
        {0xE0, "a"}, {0xE1, "a"}, {0xE2, "a"}, {0xE3, "a"}, {0xE4, "a"}, {0xE5, "a"},
        {0xE6, "ae"}, {0xE7, "c"}, {0xE8, "e"}, {0xE9, "e"}, {0xEA, "e"}, {0xEB, "e"},
        {0xEC, "i"}, {0xED, "i"}, {0xEE, "i"}, {0xEF, "i"}, {0xF0, "d"}, {0xF1, "n"},
        {0xF2, "o"}, {0xF3, "o"}, {0xF4, "o"}, {0xF5, "o"}, {0xF6, "o"}, {0xF8, "o"},
        {0xF9, "u"}, {0xFA, "u"}, {0xFB, "u"}, {0xFC, "u"}, {0xFD, "y"}, {0xFE, "th"},
        {0xFF, "y"},
        {0x100, "a"}, {0x101, "a"}, {0x102, "a"}, {0x103, "a"}, {0x104, "a"}, {0x105, "a"},
        {0x106, "c"}, {0x107, "c"}, {0x108, "c"}, {0x109, "c"}, {0x10C, "c"}, {0x10D, "c"},
        {0x10E, "d"}, {0x10F, "d"}, {0x110, "d"}, {0x111, "d"},
        {0x112, "e"}, {0x113, "e"}, {0x116, "e"}, {0x117, "e"}, {0x118, "e"}, {0x119, "e"},
        {0x11A, "e"}, {0x11B, "e"}, {0x11C, "g"}, {0x11D, "g"}, {0x11E, "g"}, {0x11F, "g"},
        {0x120, "g"}, {0x121, "g"}, {0x122, "g"}, {0x123, "g"},
        {0x130, "i"}, {0x131, "i"}, {0x141, "l"}, {0x142, "l"},
        {0x143, "n"}, {0x144, "n"}, {0x147, "n"}, {0x148, "n"},
        {0x14C, "o"}, {0x14D, "o"}, {0x150, "o"}, {0x151, "o"}, {0x152, "oe"}, {0x153, "oe"},
        {0x154, "r"}, {0x155, "r"}, {0x158, "r"}, {0x159, "r"},
        {0x15A, "s"}, {0x15B, "s"}, {0x15E, "s"}, {0x15F, "s"}, {0x160, "s"}, {0x161, "s"},
        {0x162, "t"}, {0x163, "t"}, {0x164, "t"}, {0x165, "t"},
        {0x16A, "u"}, {0x16B, "u"}, {0x16E, "u"}, {0x16F, "u"}, {0x170, "u"}, {0x171, "u"},
        {0x172, "u"}, {0x173, "u"}, {0x179, "z"}, {0x17A, "z"}, {0x17B, "z"}, {0x17C, "z"},
        {0x17D, "z"}, {0x17E, "z"},
    };
    return table;
}

// Decodes the next UTF-8 codepoint; malformed bytes decode as U+FFFD and
// advance by one so normalization never fails on noisy input.
std::uint32_t next_codepoint(const std::string& s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        ++i;
        return c;
    }
    int len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
    else { ++i; return 0xFFFD; }
    if (i + static_cast<std::size_t>(len) > s.size()) { ++i; return 0xFFFD; }
    for (int k = 1; k < len; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((cc & 0xC0) != 0x80) { ++i; return 0xFFFD; }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

bool starts_with_ci(const std::string& s, const char* prefix) {
    std::size_t n = 0;
    while (prefix[n]) ++n;
    if (s.size() < n) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
    }
    return true;
}

}  // namespace

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string normalize_title(const std::string& title) {
    std::string out;
    out.reserve(title.size());
    bool pending_space = false;
    std::size_t i = 0;
    while (i < title.size()) {
        std::uint32_t cp = next_codepoint(title, i);
        std::string piece;
        if (cp < 0x80) {
            char c = static_cast<char>(cp);
            if (std::isalnum(static_cast<unsigned char>(c))) {
                piece = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
        } else {
            auto it = fold_table().find(cp);
            if (it != fold_table().end()) piece = it->second;
        }
        if (piece.empty()) {
            pending_space = true;
        } else {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out += piece;
        }
    }
    return out;
}

std::string canonical_doi(const std::string& raw) {
    std::size_t b = raw.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = raw.find_last_not_of(" \t\r\n");
    std::string s = to_lower(raw.substr(b, e - b + 1));
    for (const char* prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                               "http://dx.doi.org/", "doi.org/", "doi:"}) {
        if (starts_with_ci(s, prefix)) {
            s = s.substr(std::string(prefix).size());
            break;
        }
    }
    return s;
}

bool looks_like_doi(const std::string& s) {
    return s.size() > 3 && s.rfind("10.", 0) == 0 && s.find('/') != std::string::npos;
}

}  // namespace citescan
