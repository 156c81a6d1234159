#include "purcell/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "purcell/errors.hpp"

namespace purcell {

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ConfigError("csv: unterminated quoted field");
    fields.push_back(std::move(field));
    return fields;
}

void write_metadata(std::ostream& out, const std::map<std::string, std::string>& entries) {
    for (const auto& [key, value] : entries) out << "# " << key << '=' << value << '\n';
}

double parse_number(const std::string& text, std::size_t row) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError("csv: row " + std::to_string(row) + ": cannot parse '" + text + "'");
    }
    return value;
}

}  // namespace

void write_csv(std::ostream& out, const SweepTable& table,
               const std::map<std::string, std::string>& footer) {
    table.validate();
    write_metadata(out, table.metadata);
    out << quote(table.axis_name);
    for (const Series& s : table.series) out << ',' << quote(s.label);
    out << '\n';
    for (std::size_t i = 0; i < table.axis_values.size(); ++i) {
        out << format_number(table.axis_values[i]);
        for (const Series& s : table.series) out << ',' << format_number(s.values[i]);
        out << '\n';
    }
    write_metadata(out, footer);
}

std::string to_csv(const SweepTable& table, const std::map<std::string, std::string>& footer) {
    std::ostringstream out;
    write_csv(out, table, footer);
    return out.str();
}

SweepTable parse_csv(std::istream& in) {
    SweepTable table;
    bool have_header = false;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            const auto eq = body.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("csv: row " + std::to_string(row) + ": metadata without '='");
            }
            table.metadata[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        const std::vector<std::string> fields = split_row(line);
        if (!have_header) {
            table.axis_name = fields.front();
            for (std::size_t i = 1; i < fields.size(); ++i) table.series.push_back({fields[i], {}});
            have_header = true;
            continue;
        }
        if (fields.size() != table.series.size() + 1) {
            throw ConfigError("csv: row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields, header has " +
                              std::to_string(table.series.size() + 1));
        }
        table.axis_values.push_back(parse_number(fields[0], row));
        for (std::size_t i = 1; i < fields.size(); ++i) {
            table.series[i - 1].values.push_back(parse_number(fields[i], row));
        }
    }
    if (!have_header) throw ConfigError("csv: no header row");
    return table;
}

SweepTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

}  // namespace purcell
