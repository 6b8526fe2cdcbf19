#include "superlimb/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "superlimb/error.hpp"

namespace superlimb::csv {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

bool Table::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

const std::vector<double>& Table::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw ParseError(name, "column not found");
}

Table parse(std::istream& in, const std::string& source) {
  Table table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = split(line);
      table.columns.resize(table.header.size());
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw ParseError(source + ":" + std::to_string(line_no),
                       "expected " + std::to_string(table.header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    for (size_t i = 0; i < fields.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(fields[i].c_str(), &end);
      if (fields[i].empty() || end == nullptr || *end != '\0') {
        throw ParseError(source + ":" + std::to_string(line_no),
                         "field '" + fields[i] + "' is not a number");
      }
      table.columns[i].push_back(v);
    }
  }
  if (table.header.empty()) throw ParseError(source, "missing header row");
  return table;
}

Table read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open '" + path + "'");
  return parse(in, path);
}

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace superlimb::csv
