#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace polarsl {

// Shortest representation that round-trips to the same double; independent
// of the global locale. Non-finite values print as nan/inf/-inf.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t width_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of a named column; throws FormatError when absent.
  std::size_t column(const std::string& name) const;
};

// Reads a header row plus numeric rows.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace polarsl
