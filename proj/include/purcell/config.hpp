// config.hpp - INI-style configuration with command-line overrides
//
//   # comment
//   e_b = 1.0            <- keys before any section apply to every subcommand
//   [rate-sweep]
//   n_modes = 4, 60      <- lists are comma or whitespace separated
//   n_s = 1 15
//
// Precedence: command line > [subcommand] section > global keys > defaults.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace purcell {

/// Keys accepted in config files and as --key=value overrides.
const std::set<std::string>& config_keys();

/// Section names accepted in config files (the subcommands).
const std::set<std::string>& config_sections();

class Config {
public:
    struct Entry {
        std::string value;
        std::string origin;  // "file.ini:12" or "--key"
    };

    /// Reads the global keys and the keys of `section`. Unknown keys or
    /// sections and malformed lines raise ConfigError naming the line.
    static Config parse(std::istream& in, const std::string& source, const std::string& section);
    static Config load(const std::string& path, const std::string& section);

    void set(const std::string& key, const std::string& value, const std::string& origin);
    [[nodiscard]] bool has(const std::string& key) const;

    [[nodiscard]] double real(const std::string& key, double fallback) const;
    [[nodiscard]] int integer(const std::string& key, int fallback) const;
    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] std::vector<double> reals(const std::string& key,
                                            const std::vector<double>& fallback) const;
    [[nodiscard]] std::vector<int> integers(const std::string& key,
                                            const std::vector<int>& fallback) const;

    [[nodiscard]] const std::map<std::string, Entry>& entries() const { return entries_; }

private:
    [[nodiscard]] const Entry* lookup(const std::string& key) const;

    std::map<std::string, Entry> entries_;
};

}  // namespace purcell
