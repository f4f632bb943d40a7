#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace kaclab::cli {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;      // measured values
  std::string tolerance;   // what they were checked against
};

struct Series {
  std::string name;
  std::vector<double> x, y;
  bool line = true;
};

struct Plot {
  std::string title, xLabel, yLabel;
  bool logX = false, logY = false;
  std::vector<Series> series;
};

struct RunReport {
  Table table;                     // the CSV table
  nlohmann::json extra;            // JSON-only detail (per-cell counts, ...)
  std::vector<Check> checks;
  Plot plot;
  bool passed() const;
};

// Shortest round-trip text for a double; identical on every run.
std::string formatNumber(double v);

void writeCsv(std::ostream& os, const Table& t);
void writeJson(std::ostream& os, const RunConfig& cfg, const RunReport& r);
void writeSvg(std::ostream& os, const Plot& p);

}  // namespace kaclab::cli
