#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tfres {

// Flat "key = value" text, one entry per line, '#' starts a comment. Keys may
// repeat; order is preserved.
struct KeyValueFile {
    std::vector<std::pair<std::string, std::string>> entries;

    static KeyValueFile parse(std::string_view text);
    static KeyValueFile load(const std::string& path);

    bool has(std::string_view key) const;
    // Last value for key; UsageError when missing.
    const std::string& get(std::string_view key) const;
    std::string get_or(std::string_view key, std::string fallback) const;
    std::vector<std::string> all(std::string_view key) const;
    double get_double(std::string_view key) const;
    int get_int(std::string_view key) const;
};

double parse_double(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace tfres
