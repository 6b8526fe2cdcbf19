#pragma once

// Minimal CSV support for traces and logs: header row, '.' decimals, LF endings.

#include <iosfwd>
#include <string>
#include <vector>

namespace superlimb::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Column by header name; throws ParseError if absent.
  const std::vector<double>& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Throws MissingFile if the path cannot be opened, ParseError on malformed rows.
Table read(const std::string& path);
Table parse(std::istream& in, const std::string& source);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace superlimb::csv
