#include "purcell/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "purcell/errors.hpp"

namespace purcell {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& value) {
    std::string spaced = value;
    for (char& c : spaced) {
        if (c == ',' || c == '[' || c == ']') c = ' ';
    }
    std::istringstream in(spaced);
    std::vector<std::string> out;
    for (std::string token; in >> token;) out.push_back(token);
    return out;
}

[[noreturn]] void fail(const Config::Entry& entry, const std::string& key, const std::string& why) {
    throw ConfigError(entry.origin + ": key '" + key + "': " + why);
}

double to_real(const Config::Entry& entry, const std::string& key, const std::string& token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != token.size() || !std::isfinite(value)) {
        fail(entry, key, "cannot parse '" + token + "' as a number");
    }
    return value;
}

int to_integer(const Config::Entry& entry, const std::string& key, const std::string& token) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != token.size()) fail(entry, key, "cannot parse '" + token + "' as an integer");
    return static_cast<int>(value);
}

}  // namespace

const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys = {
        "e_c",   "e_b",     "g",       "n_modes", "n_s",      "eta",        "temperature",
        "delta_omega", "t_max", "n_steps", "y_min", "y_max", "y_points", "out",
        "e_c_points", "modes_out",
    };
    return keys;
}

const std::set<std::string>& config_sections() {
    static const std::set<std::string> sections = {"rate-sweep", "energy-sweep", "dynamics",
                                                   "poles", "figures"};
    return sections;
}

Config Config::parse(std::istream& in, const std::string& source, const std::string& section) {
    Config global;
    Config local;
    std::string current;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string origin = source + ":" + std::to_string(number);
        std::string body = line;
        if (const auto hash = body.find_first_of("#;"); hash != std::string::npos) body.erase(hash);
        body = trim(body);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') throw ConfigError(origin + ": malformed section header");
            current = trim(body.substr(1, body.size() - 2));
            if (!config_sections().contains(current)) {
                throw ConfigError(origin + ": unknown section '" + current + "'");
            }
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!config_keys().contains(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(origin + ": key '" + key + "' has no value");
        if (current.empty()) {
            global.set(key, value, origin);
        } else if (current == section) {
            local.set(key, value, origin);
        }
    }
    for (const auto& [key, entry] : local.entries_) global.entries_[key] = entry;
    return global;
}

Config Config::load(const std::string& path, const std::string& section) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse(in, path, section);
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin) {
    if (!config_keys().contains(key)) throw ConfigError(origin + ": unknown key '" + key + "'");
    entries_[key] = Entry{value, origin};
}

bool Config::has(const std::string& key) const { return entries_.contains(key); }

const Config::Entry* Config::lookup(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

double Config::real(const std::string& key, double fallback) const {
    const Entry* entry = lookup(key);
    if (!entry) return fallback;
    const auto parts = tokens(entry->value);
    if (parts.size() != 1) fail(*entry, key, "expected a single number");
    return to_real(*entry, key, parts.front());
}

int Config::integer(const std::string& key, int fallback) const {
    const Entry* entry = lookup(key);
    if (!entry) return fallback;
    const auto parts = tokens(entry->value);
    if (parts.size() != 1) fail(*entry, key, "expected a single integer");
    return to_integer(*entry, key, parts.front());
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
    const Entry* entry = lookup(key);
    return entry ? entry->value : fallback;
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) const {
    const Entry* entry = lookup(key);
    if (!entry) return fallback;
    std::vector<double> out;
    for (const auto& token : tokens(entry->value)) out.push_back(to_real(*entry, key, token));
    if (out.empty()) fail(*entry, key, "expected at least one number");
    return out;
}

std::vector<int> Config::integers(const std::string& key, const std::vector<int>& fallback) const {
    const Entry* entry = lookup(key);
    if (!entry) return fallback;
    std::vector<int> out;
    for (const auto& token : tokens(entry->value)) out.push_back(to_integer(*entry, key, token));
    if (out.empty()) fail(*entry, key, "expected at least one integer");
    return out;
}

}  // namespace purcell
