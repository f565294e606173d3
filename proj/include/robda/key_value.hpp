#ifndef ROBDA_KEY_VALUE_HPP
#define ROBDA_KEY_VALUE_HPP

// Flat `key = value` config files; '#' starts a comment, blank lines are skipped.

#include "robda/error.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace robda {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline KeyValues read_key_values(std::istream& in) {
    auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
    };
    KeyValues out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        std::string key = trim(line.substr(0, eq));
        if (key.empty() && eq == std::string::npos) continue;
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": missing '='");
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": missing key");
        out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
    }
    return out;
}

inline KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return read_key_values(in);
}

} // namespace robda

#endif // ROBDA_KEY_VALUE_HPP
