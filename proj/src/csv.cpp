#include "swing/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace swing {

std::string format_double(double x) {
  char buf[32];
  // 17 significant digits round-trip any finite double.
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  double out = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || p != e) {
    // from_chars rejects "nan"/"inf" spellings on some libstdc++ versions.
    try {
      std::size_t pos = 0;
      out = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
    } catch (...) {
      throw std::invalid_argument("not a number: '" + s + "'");
    }
  }
  return out;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (!header.empty() && row.size() != header.size())
    throw std::invalid_argument("csv row width does not match header");
  for (const auto& c : row)
    if (c.find_first_of(",\"\n") != std::string::npos)
      throw std::invalid_argument("csv cell needs quoting, unsupported: " + c);
  rows.push_back(std::move(row));
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of(",\"\n") != std::string::npos)
        throw std::invalid_argument("csv cell needs quoting, unsupported: " + cells[i]);
      out << cells[i] << (i + 1 < cells.size() ? "," : "");
    }
    out << "\n";
  };
  if (!header.empty()) emit(header);
  for (const auto& r : rows) emit(r);
}

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read csv: " + path);
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t s = line.size() > 1 && line[1] == ' ' ? 2 : 1;
      t.comments.push_back(line.substr(s));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

}  // namespace swing
