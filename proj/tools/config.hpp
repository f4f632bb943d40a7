#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace kaclab::cli {

// Bad flags or config; maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string subcommand;
  std::vector<int> degrees{16, 25, 64, 100, 256, 400};
  long samples = 20000;
  std::optional<int> kmax;  // per-subcommand default when absent
  std::uint64_t seed = 1;
  double cPrime = 1.0;
  std::optional<int> grid;  // per-subcommand default when absent
  long mcBudget = 100000;
  std::string out;          // empty: stdout
  Format format = Format::Csv;
  unsigned threads = 1;
  bool plot = false;

  int gridOr(int fallback) const { return grid.value_or(fallback); }
  int kmaxOr(int fallback) const { return kmax.value_or(fallback); }
  // Echo for reports. Thread count and output path are left out so the
  // report is identical however it was produced.
  nlohmann::json echo() const;
};

// Applies a flat JSON object on top of `cfg`. Throws UsageError naming the
// line or field at fault.
void applyConfigFile(RunConfig& cfg, const std::string& path);
void validate(RunConfig& cfg);

}  // namespace kaclab::cli
