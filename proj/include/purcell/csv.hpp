// csv.hpp - CSV emission and parsing for sweep tables
//
// Layout: "# key=value" metadata lines, one header row (axis name first),
// then one row per axis value. Numbers use 12 significant digits. Fields that
// contain commas or quotes are double-quoted. "#" lines after the data are
// footer metadata and parse into the same map.

#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "purcell/sweep.hpp"

namespace purcell {

void write_csv(std::ostream& out, const SweepTable& table,
               const std::map<std::string, std::string>& footer = {});

std::string to_csv(const SweepTable& table, const std::map<std::string, std::string>& footer = {});

SweepTable parse_csv(std::istream& in);

SweepTable parse_csv(const std::string& text);

}  // namespace purcell
