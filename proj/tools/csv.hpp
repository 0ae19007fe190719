#pragma once

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "trobust/simulate.hpp"

namespace trobust::cli {

// CSV ingestion failure with the 1-based line it occurred on.
class CsvParseError : public std::runtime_error {
 public:
  CsvParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A parsed numeric CSV: one header row, then all-numeric data rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> values;

  std::size_t rows() const noexcept { return values.size(); }
  std::size_t cols() const noexcept { return header.size(); }
};

// Read a comma-separated file with a mandatory header row; every data cell
// must parse as a number. CRLF line ends are tolerated. Throws CsvParseError.
CsvTable readCsv(const std::string& path);

// Long-format metrics table: one row per (method, metric), with "NA" for
// non-finite values. Schema: method,metric,value,n,p,nu_true,diagnostics.
void writeMetricsCsv(const MetricsReport& report, std::ostream& out);

}  // namespace trobust::cli
