#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace netinf::csv {

// A parsed CSV file: header row plus string cells. Numeric conversion is
// done on demand so callers can report the offending line on bad input.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source;  // path or description, used in error messages

  std::size_t n_rows() const { return rows.size(); }
  // Index of a named column, or throws DataError naming the source.
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;
  // Whole column parsed as doubles; throws DataError with the 1-based file
  // line number on non-numeric cells.
  Eigen::VectorXd numeric_column(const std::string& name) const;
};

Table read_csv(std::istream& in, const std::string& source);
Table read_csv_file(const std::string& path);

// Parses a cell as double; throws DataError mentioning source/line on failure.
double parse_double(const std::string& cell, const std::string& source, std::size_t line);

}  // namespace netinf::csv
