#include "core/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace tfres {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view text, std::string_view what) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw UsageError("invalid number for " + std::string(what) + ": '" + t + "'");
    }
    return value;
}

int parse_int(std::string_view text, std::string_view what) {
    const std::string t = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
        throw UsageError("invalid integer for " + std::string(what) + ": '" + t + "'");
    }
    return value;
}

KeyValueFile KeyValueFile::parse(std::string_view text) {
    KeyValueFile out;
    std::istringstream lines{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        auto sep = body.find('=');
        if (sep == std::string::npos) sep = body.find_first_of(" \t");
        if (sep == std::string::npos) {
            throw UsageError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(body).substr(0, sep));
        std::string value = trim(std::string_view(body).substr(sep + 1));
        if (key.empty()) throw UsageError("line " + std::to_string(lineno) + ": empty key");
        out.entries.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool KeyValueFile::has(std::string_view key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return true;
    }
    return false;
}

const std::string& KeyValueFile::get(std::string_view key) const {
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->first == key) return it->second;
    }
    throw UsageError("missing key '" + std::string(key) + "'");
}

std::string KeyValueFile::get_or(std::string_view key, std::string fallback) const {
    return has(key) ? get(key) : fallback;
}

std::vector<std::string> KeyValueFile::all(std::string_view key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries) {
        if (k == key) out.push_back(v);
    }
    return out;
}

double KeyValueFile::get_double(std::string_view key) const { return parse_double(get(key), key); }

int KeyValueFile::get_int(std::string_view key) const { return parse_int(get(key), key); }

}  // namespace tfres
