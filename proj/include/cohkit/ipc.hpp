#pragma once
// International Patent Classification codes. A code names a node in the
// section / class / subclass / group hierarchy:
//
//   G            section   (level 1)
//   G06          class     (level 2)
//   G06F         subclass  (level 3)
//   G06F1/16     group     (level 4)
//
// Truncation to level k keeps the prefix and is a no-op on codes that are
// already shallower than k.

#include <cctype>
#include <optional>
#include <string>

#include "cohkit/errors.hpp"

namespace cohkit {

struct IpcCode {
    std::string raw;  // normalized: uppercase, no whitespace
    int level = 0;    // 1..4

    std::string truncated(int target_level) const {
        if (target_level < 1 || target_level > 4) throw InvalidLevel(target_level);
        if (target_level >= level) return raw;
        switch (target_level) {
            case 1: return raw.substr(0, 1);
            case 2: return raw.substr(0, 3);
            default: return raw.substr(0, 4);
        }
    }
};

namespace detail {

inline bool is_section(char c) { return c >= 'A' && c <= 'H'; }

}  // namespace detail

// Returns nullopt when `text` does not match the IPC grammar.
inline std::optional<IpcCode> parse_ipc(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (s.empty() || !detail::is_section(s[0])) return std::nullopt;
    if (s.size() == 1) return IpcCode{s, 1};
    if (s.size() < 3 || !std::isdigit(static_cast<unsigned char>(s[1])) ||
        !std::isdigit(static_cast<unsigned char>(s[2])))
        return std::nullopt;
    if (s.size() == 3) return IpcCode{s, 2};
    if (!std::isupper(static_cast<unsigned char>(s[3]))) return std::nullopt;
    if (s.size() == 4) return IpcCode{s, 3};

    // group part: 1-4 digit main group, '/', 2-6 digit subgroup
    std::size_t i = 4, digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
        ++digits;
    }
    if (digits < 1 || digits > 4 || i >= s.size() || s[i] != '/') return std::nullopt;
    ++i;
    std::size_t sub = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
        ++sub;
    }
    if (sub < 2 || sub > 6 || i != s.size()) return std::nullopt;
    return IpcCode{s, 4};
}

// Section letter of any valid code, used to color exported networks.
inline char ipc_section(const std::string& code) {
    return code.empty() ? '?' : code[0];
}

}  // namespace cohkit
