#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Flat key=value scenario files with a [model] and a [command] section.
// Values are kept as the exact text written, so serialize(parse(x)) round-
// trips every decimal literal unchanged.

namespace popdyn {

struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct Scenario {
    struct Entry {
        std::string section;
        std::string key;
        std::string value;  // raw text, trimmed
    };
    std::vector<Entry> entries;  // file order

    const std::string* find(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;  // throws if absent
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    int get_int_or(const std::string& section, const std::string& key, int fallback) const;
    std::vector<std::string> keys(const std::string& section) const;

    bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

}  // namespace popdyn
