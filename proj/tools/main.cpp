#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "kaclab/error.hpp"
#include "report.hpp"

using namespace kaclab::cli;

namespace {

enum Exit { kPass = 0, kUsage = 1, kNumerical = 2, kCheckFailed = 3 };

const std::map<std::string, std::pair<std::string, std::function<RunReport(const RunConfig&)>>> kCommands{
    {"moments", {"Monte Carlo moments of the real zero count", runMomentsCommand}},
    {"kacrice", {"Kac-Rice densities and their integrals (k <= 3)", runKacRiceCommand}},
    {"compare", {"simulated factorial moments against quadrature", runCompareCommand}},
    {"concentration", {"probability of large deviations from sqrt(d)", runConcentrationCommand}},
    {"bergman", {"scaled kernel against the Bargmann-Fock kernel", runBergmanCommand}},
    {"neardiag", {"near-diagonal densities: vanishing, boundedness, agreement", runNearDiagCommand}},
    {"fit", {"asymptotic fit of the raw moments", runFitCommand}},
    {"complex", {"equidistribution of complex zeros on the sphere", runComplexCommand}},
};

struct Flags {
  std::vector<int> degrees;
  long samples = 0;
  int kmax = 0;
  std::uint64_t seed = 0;
  double cPrime = 0;
  int grid = 0;
  long mcBudget = 0;
  std::string out, format, config;
  unsigned threads = 0;
  bool plot = false;
};

void writeOutputs(const RunConfig& cfg, const RunReport& r) {
  std::ostringstream body;
  if (cfg.format == Format::Csv) writeCsv(body, r.table);
  else writeJson(body, cfg, r);
  if (cfg.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + cfg.out);
    f << body.str();
  }
  if (cfg.plot) {
    const std::string path = (cfg.out.empty() ? "kaclab-" + cfg.subcommand : cfg.out) + ".svg";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    writeSvg(f, r.plot);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kaclab: zeros of random Kostlan polynomials"};
  app.require_subcommand(1);
  Flags fl;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& [name, entry] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    opts[name + "degrees"] = sub->add_option("--degrees", fl.degrees, "degrees, comma separated")->delimiter(',');
    opts[name + "samples"] = sub->add_option("--samples", fl.samples, "samples per degree");
    opts[name + "kmax"] = sub->add_option("--kmax", fl.kmax, "highest moment order");
    opts[name + "seed"] = sub->add_option("--seed", fl.seed, "master seed");
    opts[name + "cprime"] = sub->add_option("--cprime", fl.cPrime, "far-diagonal constant C'");
    opts[name + "grid"] = sub->add_option("--grid", fl.grid, "quadrature nodes, kernel grid or sphere cells");
    opts[name + "mc-budget"] = sub->add_option("--mc-budget", fl.mcBudget, "Monte Carlo draws per expectation");
    opts[name + "out"] = sub->add_option("--out", fl.out, "output file (default stdout)");
    opts[name + "format"] = sub->add_option("--format", fl.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    opts[name + "threads"] = sub->add_option("--threads", fl.threads, "worker threads");
    opts[name + "plot"] = sub->add_flag("--plot", fl.plot, "also write an SVG plot");
    opts[name + "config"] = sub->add_option("--config", fl.config, "flat JSON config; flags override it");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  RunConfig cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  cfg.subcommand = app.get_subcommands().front()->get_name();
  const std::string& s = cfg.subcommand;
  auto given = [&](const char* flag) { return opts[s + flag]->count() > 0; };
  try {
    if (given("config")) applyConfigFile(cfg, fl.config);
    if (given("degrees")) cfg.degrees = fl.degrees;
    if (given("samples")) cfg.samples = fl.samples;
    if (given("kmax")) cfg.kmax = fl.kmax;
    if (given("seed")) cfg.seed = fl.seed;
    if (given("cprime")) cfg.cPrime = fl.cPrime;
    if (given("grid")) cfg.grid = fl.grid;
    if (given("mc-budget")) cfg.mcBudget = fl.mcBudget;
    if (given("out")) cfg.out = fl.out;
    if (given("format")) cfg.format = fl.format == "json" ? Format::Json : Format::Csv;
    if (given("threads")) cfg.threads = fl.threads;
    if (given("plot")) cfg.plot = fl.plot;
    validate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "kaclab " << s << ": " << e.what() << "\n";
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  try {
    report = kCommands.at(s).second(cfg);
  } catch (const kaclab::Error& e) {
    std::cerr << "kaclab " << s << ": numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  try {
    writeOutputs(cfg, report);
  } catch (const UsageError& e) {
    std::cerr << "kaclab " << s << ": " << e.what() << "\n";
    return kUsage;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail << " (" << c.tolerance << ")\n";
  }
  std::fprintf(stderr, "%s finished in %.2fs\n", s.c_str(), secs);
  return report.passed() ? kPass : kCheckFailed;
}
