#pragma once

#include <string>
#include <vector>

namespace swing {

// Round-trip-exact text form of a double (shortest %.17g-style decimal).
std::string format_double(double x);
double parse_double(const std::string& s);

// Minimal CSV with leading '#' schema/comment lines: enough for the price
// tables, training logs and learning curves, and re-parsable to identical
// values.
struct CsvTable {
  std::vector<std::string> comments;  // written first, each prefixed "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);

  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);
};

}  // namespace swing
