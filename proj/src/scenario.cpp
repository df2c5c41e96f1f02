#include "popdyn/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace popdyn {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::string* Scenario::find(const std::string& section, const std::string& key) const {
    for (const auto& e : entries)
        if (e.section == section && e.key == key) return &e.value;
    return nullptr;
}

std::string Scenario::get(const std::string& section, const std::string& key) const {
    if (const auto* v = find(section, key)) return *v;
    throw ScenarioError("scenario: missing key '" + key + "' in section [" + section + "]");
}

std::string Scenario::get_or(const std::string& section, const std::string& key,
                             const std::string& fallback) const {
    if (const auto* v = find(section, key)) return *v;
    return fallback;
}

double Scenario::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ScenarioError("scenario: key '" + key + "' is not a number: '" + v + "'");
    }
}

double Scenario::get_double_or(const std::string& section, const std::string& key,
                               double fallback) const {
    return find(section, key) ? get_double(section, key) : fallback;
}

int Scenario::get_int_or(const std::string& section, const std::string& key, int fallback) const {
    if (!find(section, key)) return fallback;
    const std::string v = get(section, key);
    try {
        size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ScenarioError("scenario: key '" + key + "' is not an integer: '" + v + "'");
    }
}

std::vector<std::string> Scenario::keys(const std::string& section) const {
    std::vector<std::string> out;
    for (const auto& e : entries)
        if (e.section == section) out.push_back(e.key);
    return out;
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            if (section != "model" && section != "command")
                throw ScenarioError("scenario line " + std::to_string(lineno) +
                                    ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("scenario line " + std::to_string(lineno) +
                                ": expected key = value");
        if (section.empty())
            throw ScenarioError("scenario line " + std::to_string(lineno) +
                                ": key outside a section");
        Scenario::Entry e;
        e.section = section;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        if (e.key.empty())
            throw ScenarioError("scenario line " + std::to_string(lineno) + ": empty key");
        if (sc.find(e.section, e.key))
            throw ScenarioError("scenario line " + std::to_string(lineno) + ": duplicate key '" +
                                e.key + "'");
        sc.entries.push_back(std::move(e));
    }
    if (!sc.find("model", "family")) throw ScenarioError("scenario: [model] family is required");
    if (!sc.find("command", "name")) throw ScenarioError("scenario: [command] name is required");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ScenarioError("cannot read scenario file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    std::string section;
    for (const auto& e : s.entries) {
        if (e.section != section) {
            if (!section.empty()) out << "\n";
            out << '[' << e.section << "]\n";
            section = e.section;
        }
        out << e.key << " = " << e.value << "\n";
    }
    return out.str();
}

}  // namespace popdyn
