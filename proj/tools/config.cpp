#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace kaclab::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kFields{"subcommand", "degrees", "samples", "kmax",   "seed",    "cPrime",
                                    "grid",       "mcBudget", "out",    "format", "threads", "plot"};

[[noreturn]] void fieldError(const std::string& field, const std::string& what) {
  throw UsageError("config field '" + field + "': " + what);
}

long integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fieldError(field, "expected an integer");
  return v.get<long>();
}

int lineOf(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

json RunConfig::echo() const {
  json j;
  j["subcommand"] = subcommand;
  j["degrees"] = degrees;
  j["samples"] = samples;
  j["kmax"] = kmax ? nlohmann::json(*kmax) : nlohmann::json(nullptr);
  j["seed"] = seed;
  j["cPrime"] = cPrime;
  j["grid"] = grid ? json(*grid) : json(nullptr);
  j["mcBudget"] = mcBudget;
  j["format"] = format == Format::Csv ? "csv" : "json";
  return j;
}

void applyConfigFile(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": line " + std::to_string(lineOf(text, e.byte)) + ": malformed JSON");
  }
  if (!j.is_object()) throw UsageError(path + ": config must be a flat JSON object");
  for (const auto& [key, v] : j.items()) {
    if (!kFields.contains(key)) fieldError(key, "unknown field");
    if (key == "subcommand") {
      if (!v.is_string()) fieldError(key, "expected a string");
      if (v.get<std::string>() != cfg.subcommand) fieldError(key, "does not match the command line");
    } else if (key == "degrees") {
      if (!v.is_array()) fieldError(key, "expected an array of integers");
      cfg.degrees.clear();
      for (const auto& d : v) cfg.degrees.push_back(static_cast<int>(integer(d, key)));
    } else if (key == "samples") {
      cfg.samples = integer(v, key);
    } else if (key == "kmax") {
      cfg.kmax = static_cast<int>(integer(v, key));
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) fieldError(key, "expected a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "cPrime") {
      if (!v.is_number()) fieldError(key, "expected a number");
      cfg.cPrime = v.get<double>();
    } else if (key == "grid") {
      cfg.grid = static_cast<int>(integer(v, key));
    } else if (key == "mcBudget") {
      cfg.mcBudget = integer(v, key);
    } else if (key == "out") {
      if (!v.is_string()) fieldError(key, "expected a string");
      cfg.out = v.get<std::string>();
    } else if (key == "format") {
      if (!v.is_string()) fieldError(key, "expected \"csv\" or \"json\"");
      const auto f = v.get<std::string>();
      if (f == "csv") cfg.format = Format::Csv;
      else if (f == "json") cfg.format = Format::Json;
      else fieldError(key, "expected \"csv\" or \"json\"");
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(integer(v, key));
      if (integer(v, key) < 1) fieldError(key, "must be positive");
    } else if (key == "plot") {
      if (!v.is_boolean()) fieldError(key, "expected a boolean");
      cfg.plot = v.get<bool>();
    }
  }
}

void validate(RunConfig& cfg) {
  if (cfg.degrees.empty()) throw UsageError("--degrees: need at least one degree");
  for (int d : cfg.degrees) {
    if (d < 1) throw UsageError("--degrees: degrees must be positive");
  }
  std::sort(cfg.degrees.begin(), cfg.degrees.end());
  cfg.degrees.erase(std::unique(cfg.degrees.begin(), cfg.degrees.end()), cfg.degrees.end());
  if (cfg.samples < 2) throw UsageError("--samples: need at least 2");
  if (cfg.kmax && (*cfg.kmax < 1 || *cfg.kmax > 5)) throw UsageError("--kmax: must lie in [1, 5]");
  if (!(cfg.cPrime > 0.0)) throw UsageError("--cprime: must be positive");
  if (cfg.grid && *cfg.grid < 1) throw UsageError("--grid: must be positive");
  if (cfg.mcBudget < 1) throw UsageError("--mc-budget: must be positive");
  if (cfg.threads < 1) throw UsageError("--threads: must be positive");
}

}  // namespace kaclab::cli
