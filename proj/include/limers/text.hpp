#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace limers {

std::vector<std::string> split(std::string_view line, std::string_view sep);

// One CSV record, double-quote aware ("" escapes a quote inside a field).
std::vector<std::string> split_csv(std::string_view line);

std::string csv_escape(std::string_view field);

std::string_view trim(std::string_view s);

bool parse_double(std::string_view s, double& out);
bool parse_long(std::string_view s, long long& out);

// Shortest decimal form that parses back to the same double.
inline std::string format_exact(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace limers
