#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trobust::cli {

namespace {

std::vector<std::string> splitLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string formatCell(double value) {
  if (!std::isfinite(value)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

}  // namespace

CsvTable readCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CsvParseError("cannot open '" + path + "'", 0);
  }
  CsvTable table;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineNo == 1) {
      table.header = splitLine(line);
      if (table.header.size() < 2 || table.header[0].empty()) {
        throw CsvParseError("expected a header row with at least two columns",
                            lineNo);
      }
      continue;
    }
    if (line.empty()) continue;  // ignore trailing blank lines
    const auto fields = splitLine(line);
    if (fields.size() != table.header.size()) {
      throw CsvParseError("expected " + std::to_string(table.header.size()) +
                              " fields, got " + std::to_string(fields.size()),
                          lineNo);
    }
    std::vector<double> row(fields.size(), 0.0);
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const std::string& cell = fields[j];
      double value = 0.0;
      const auto result =
          std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (result.ec != std::errc{} || result.ptr != cell.data() + cell.size()) {
        throw CsvParseError("column '" + table.header[j] + "': '" + cell +
                                "' is not a number",
                            lineNo);
      }
      row[j] = value;
    }
    table.values.push_back(std::move(row));
  }
  if (lineNo == 0) {
    throw CsvParseError("empty file '" + path + "'", 0);
  }
  return table;
}

void writeMetricsCsv(const MetricsReport& report, std::ostream& out) {
  const std::string nuTrue =
      report.nuTrue.has_value() ? formatCell(*report.nuTrue) : "real-data";
  const std::string stem = std::to_string(report.n) + "," +
                           std::to_string(report.p) + "," + nuTrue;
  out << "method,metric,value,n,p,nu_true,diagnostics\n";
  for (const MethodReport& m : report.methods) {
    auto row = [&](const std::string& metric, const std::string& value,
                   const std::string& diagnostics) {
      std::string clean = diagnostics;  // keep the one-row-per-cell contract
      for (char& c : clean) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
      }
      out << m.label << ',' << metric << ',' << value << ',' << stem << ','
          << clean << '\n';
    };
    row("rmse_beta", formatCell(m.rmseBetaValue), "");
    if (m.nuApplicable) {
      const std::string flag = m.nu.undefined ? "undefined" : "";
      row("nu_rmse", formatCell(m.nu.rmse), flag);
      row("nu_bias", formatCell(m.nu.bias), flag);
      row("nu_se", formatCell(m.nu.se), flag);
      row("nu_se_pop", formatCell(m.nu.sePop), flag);
      row("nu_count", std::to_string(m.nu.count), flag);
    }
    row("successes", std::to_string(m.successes), "");
    row("convergence_failures", std::to_string(m.convergenceFailures),
        m.firstError);
    row("flatness_flagged", std::to_string(m.flatnessFlagged), "");
    row("error_failures", std::to_string(m.errorFailures), "");
    row("gaussian_capped", std::to_string(m.gaussianCapped), "");
  }
}

}  // namespace trobust::cli
