#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "motioneval/error.hpp"

namespace motioneval::detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline int parse_int(std::string_view token, std::string_view what) {
    token = trim(token);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("bad " + std::string(what) + " '" + std::string(token) + "'");
    return value;
}

inline double parse_double(std::string_view token, std::string_view what) {
    token = trim(token);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("bad " + std::string(what) + " '" + std::string(token) + "'");
    return value;
}

inline double parse_finite(std::string_view token, std::string_view what) {
    double value = parse_double(token, what);
    if (!std::isfinite(value))
        throw ParseError("non-finite " + std::string(what) + " '" + std::string(token) +
                         "'");
    return value;
}

} // namespace motioneval::detail
