#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kaclab/empirics.hpp"
#include "kaclab/kacrice.hpp"
#include "kaclab/kernels.hpp"
#include "kaclab/multijet.hpp"
#include "tolerances.hpp"

namespace kaclab::cli {

namespace {

using I = std::int64_t;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

I seedCell(const RunConfig& cfg) { return static_cast<I>(cfg.seed); }

// Per-degree seed so that adding a degree never changes the others.
std::uint64_t degreeSeed(const RunConfig& cfg, int d) { return cfg.seed + static_cast<std::uint64_t>(d); }

bool strictlyDecreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::vector<MomentReport> momentGrid(const RunConfig& cfg, int kmax, int bootstrap) {
  std::vector<MomentReport> out;
  for (int d : cfg.degrees) out.push_back(runMoments(d, cfg.samples, kmax, degreeSeed(cfg, d), cfg.threads, bootstrap));
  return out;
}

}  // namespace

// Columns: d, N, seed, k, rawMoment, rawStderr, centralMoment, centralStderr,
// centralLow, centralHigh, centralTrueMoment, centralTrueStderr,
// fallingFactorial, fallingStderr.
RunReport runMomentsCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "moments";
  r.table.columns = {"d",           "N",           "seed",         "k",
                     "rawMoment",   "rawStderr",   "centralMoment", "centralStderr",
                     "centralLow",  "centralHigh", "centralTrueMoment", "centralTrueStderr",
                     "fallingFactorial", "fallingStderr"};
  const auto reports = momentGrid(cfg, cfg.kmaxOr(4), 1000);
  Series mean{"mean real zeros", {}, {}, false}, root{"sqrt(d)", {}, {}, true};
  nlohmann::json histograms = nlohmann::json::object();
  for (const auto& rep : reports) {
    for (const auto& row : rep.rows) {
      r.table.rows.push_back({I(rep.degree), I(rep.samples), I(rep.seed), I(row.k), row.raw, row.rawStdError,
                              row.central, row.centralStdError, row.centralLow, row.centralHigh, row.centralTrue,
                              row.centralTrueStdError, row.falling, row.fallingStdError});
    }
    const MomentRow& m = rep.row(1);
    const double z = (m.raw - std::sqrt(rep.degree)) / m.rawStdError;
    r.checks.push_back({fmt("mean d=%d", rep.degree), std::abs(z) <= tol::kMeanSigmas,
                        fmt("mean=%s se=%s z=%s", formatNumber(m.raw).c_str(), formatNumber(m.rawStdError).c_str(),
                            formatNumber(z).c_str()),
                        fmt("|z| <= %g", tol::kMeanSigmas)});
    r.checks.push_back({fmt("stirling d=%d", rep.degree), rep.stirlingExact, "n^k = sum S(k,m) (n)_m per sample",
                        "exact"});
    histograms[std::to_string(rep.degree)] = rep.histogram;
    mean.x.push_back(rep.degree);
    mean.y.push_back(m.raw);
    root.x.push_back(rep.degree);
    root.y.push_back(std::sqrt(rep.degree));
  }
  r.extra["histograms"] = histograms;
  r.plot = {"Mean number of real zeros", "degree d", "E[#Z]", true, true, {root, mean}};
  return r;
}

// Columns: d, k, nodes, integral, expected, richardsonDelta, stdError,
// tubeContribution, seed.
RunReport runKacRiceCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "kacrice";
  r.table.columns = {"d", "k", "nodes", "integral", "expected", "richardsonDelta", "stdError", "tubeContribution",
                     "seed"};
  QuadSpec q;
  q.nodes = cfg.gridOr(512);
  q.mcBudget = cfg.mcBudget;
  q.seed = cfg.seed;
  q.threads = cfg.threads;
  const int kTop = std::min(cfg.kmaxOr(2), 3);
  Series s{"integral of rho_1", {}, {}, false}, root{"sqrt(d)", {}, {}, true};
  for (int d : cfg.degrees) {
    for (int k = 1; k <= kTop; ++k) {
      const QuadResult res = integrateDensity(d, k, nullptr, q);
      const double expected = k == 1 ? std::sqrt(d) : std::nan("");
      r.table.rows.push_back({I(d), I(k), I(q.nodes), res.value, k == 1 ? Cell(expected) : Cell(std::string()),
                              res.richardsonDelta, res.stdError, res.tubeContribution, seedCell(cfg)});
      if (k == 1) {
        const double rel = std::abs(res.value / expected - 1.0);
        r.checks.push_back({fmt("integral of rho_1 d=%d", d), rel <= tol::kAnalyticMeanRel,
                            "relative error " + formatNumber(rel), fmt("<= %g", tol::kAnalyticMeanRel)});
        s.x.push_back(d);
        s.y.push_back(res.value);
        root.x.push_back(d);
        root.y.push_back(expected);
      }
    }
  }
  r.plot = {"Integral of the one-point density", "degree d", "integral", true, true, {root, s}};
  return r;
}

// Columns: d, k, N, mcFallingMoment, mcStderr, quadrature, quadError, z, seed.
RunReport runCompareCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "compare";
  r.table.columns = {"d", "k", "N", "mcFallingMoment", "mcStderr", "quadrature", "quadError", "z", "seed"};
  QuadSpec q;
  q.nodes = cfg.gridOr(512);
  q.mcBudget = cfg.mcBudget;
  q.seed = cfg.seed;
  q.threads = cfg.threads;
  const int kTop = std::min(cfg.kmaxOr(2), 3);
  Series mc{"simulation", {}, {}, false}, quad{"quadrature", {}, {}, true};
  for (int d : cfg.degrees) {
    const MomentReport rep = runMoments(d, cfg.samples, kTop, degreeSeed(cfg, d), cfg.threads, 0);
    for (int k = 1; k <= kTop; ++k) {
      const QuadResult res = integrateDensity(d, k, nullptr, q);
      const MomentRow& row = rep.row(k);
      const double err = res.richardsonDelta + res.stdError;
      const double z = (row.falling - res.value) / std::hypot(row.fallingStdError, err);
      r.table.rows.push_back({I(d), I(k), I(cfg.samples), row.falling, row.fallingStdError, res.value, err, z,
                              I(rep.seed)});
      r.checks.push_back({fmt("falling moment d=%d k=%d", d, k), std::abs(z) <= tol::kBridgeSigmas,
                          "z=" + formatNumber(z), fmt("|z| <= %g", tol::kBridgeSigmas)});
      if (k == 2) {
        mc.x.push_back(d);
        mc.y.push_back(row.falling);
        quad.x.push_back(d);
        quad.y.push_back(res.value);
      }
    }
  }
  r.plot = {"E[#Z(#Z-1)]: simulation and quadrature", "degree d", "second factorial moment", true, true,
            {quad, mc}};
  return r;
}

// Columns: d, N, c, fraction, stdError, seed.
RunReport runConcentrationCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "concentration";
  r.table.columns = {"d", "N", "c", "fraction", "stdError", "seed"};
  const std::vector<double> levels{0.25, 0.5, 0.75};
  std::vector<Series> series;
  for (double c : levels) series.push_back({fmt("c=%g", c), {}, {}, true});
  std::vector<double> checked;
  for (const auto& rep : momentGrid(cfg, 1, 0)) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const Proportion p = deviationProbability(rep, levels[i]);
      r.table.rows.push_back({I(rep.degree), I(rep.samples), levels[i], p.fraction, p.stdError, I(rep.seed)});
      series[i].x.push_back(rep.degree);
      series[i].y.push_back(p.fraction);
      if (levels[i] == tol::kConcentrationC) checked.push_back(p.fraction);
    }
  }
  std::string seq;
  for (double v : checked) seq += formatNumber(v) + " ";
  r.checks.push_back({fmt("P(|n - sqrt d| > %g sqrt d) decreasing", tol::kConcentrationC),
                      strictlyDecreasing(checked), seq, "strictly decreasing in d"});
  r.plot = {"Deviation probability", "degree d", "P(|#Z - sqrt d| > c sqrt d)", true, false, series};
  return r;
}

// Columns: d, R, grid, deviation, deviationDeriv1, scaledDeviation (d * deviation).
RunReport runBergmanCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "bergman";
  r.table.columns = {"d", "R", "grid", "deviation", "deviationDeriv1", "scaledDeviation"};
  const int grid = cfg.gridOr(50);
  std::vector<double> dev;
  Series s{"sup |K_d - K_BF|", {}, {}, false}, s1{"with first derivatives", {}, {}, false};
  for (int d : cfg.degrees) {
    const double v = bergmanDeviation(d, tol::kBergmanRadius, grid, 0);
    const double v1 = bergmanDeviation(d, tol::kBergmanRadius, grid, 1);
    dev.push_back(v);
    r.table.rows.push_back({I(d), tol::kBergmanRadius, I(grid), v, v1, d * v});
    s.x.push_back(d);
    s.y.push_back(v);
    s1.x.push_back(d);
    s1.y.push_back(v1);
  }
  std::string seq;
  for (double v : dev) seq += formatNumber(v) + " ";
  r.checks.push_back({"deviation decreasing", strictlyDecreasing(dev), seq, "strictly decreasing in d"});
  r.plot = {"Scaled kernel against Bargmann-Fock", "degree d", "sup deviation", true, true, {s, s1}};
  return r;
}

// Columns: d, experiment, parameter, value, reference, stdError, seed.
// Experiments: vanishing (rho_2 at eps scaled units), factorization (max
// defect over far pairs, parameter = cPrime), bounded (max rho / sqrt(d)^k
// over random configurations), cross (max |difference| / se).
RunReport runNearDiagCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "neardiag";
  r.table.columns = {"d", "experiment", "parameter", "value", "reference", "stdError", "seed"};
  const long configs = std::min<long>(cfg.samples, 1000);
  std::vector<Series> vanishing;
  Series bounded{"max rho / sqrt(d)^k", {}, {}, false};
  for (int d : cfg.degrees) {
    const KostlanKernel k(d, 8);
    const double rho1sq = d / std::numbers::pi;
    const double toArc = 1.0 / (kSqrtPi * std::sqrt(static_cast<double>(d)));
    Series curve{fmt("d=%d", d), {}, {}, true};
    std::vector<double> values;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double v = nearDiagonalDensity(k, Configuration{d, {0.4, 0.4 + eps * toArc}}, RandomStream(cfg.seed)).value;
      values.push_back(v);
      r.table.rows.push_back({I(d), std::string("vanishing"), eps, v, rho1sq, 0.0, seedCell(cfg)});
      curve.x.push_back(eps);
      curve.y.push_back(v);
    }
    vanishing.push_back(curve);
    r.checks.push_back({fmt("diagonal vanishing d=%d", d),
                        strictlyDecreasing(values) && values.back() < tol::kVanishingFraction * rho1sq,
                        "rho_2(1e-4)=" + formatNumber(values.back()),
                        fmt("decreasing, < %g rho_1^2", tol::kVanishingFraction)});

    RandomStream rng(degreeSeed(cfg, d));
    const double far = farDiagonalThreshold(d, cfg.cPrime);
    double defect = 0.0;
    if (far < 0.5 * FSGeometry::totalLength()) {
      for (int i = 0; i < 100; ++i) {
        const double u = rng.uniform(0.0, FSGeometry::totalLength());
        const double v = FSGeometry::wrap(u + rng.uniform(far, FSGeometry::totalLength() - far));
        defect = std::max(defect, std::abs(factorizationDefect(k, u, v)));
      }
      r.table.rows.push_back({I(d), std::string("factorization"), cfg.cPrime, defect, tol::kFactorizationMax, 0.0,
                              seedCell(cfg)});
    }

    const double thr = 1.0 / std::sqrt(static_cast<double>(d));
    NearDiagonalOptions opt;
    opt.mcBudget = cfg.mcBudget;
    double worst = 0.0, worstSe = 0.0;
    for (long i = 0; i < configs; ++i) {
      const int kpts = 2 + static_cast<int>(rng.bits() % 2);
      std::vector<double> pts{rng.uniform(0.0, FSGeometry::totalLength())};
      for (int j = 1; j < kpts; ++j) {
        const bool cluster = rng.uniform() < 0.6;
        const double off = cluster ? rng.uniform(-1.0, 1.0) * thr : rng.uniform(0.0, FSGeometry::totalLength());
        pts.push_back(FSGeometry::wrap(pts[0] + off));
      }
      const ScalingDiagnostics s = scalingDiagnostics(k, Configuration{d, pts}, rng.substream(i), opt);
      if (s.normalizedDensity > worst) {
        worst = s.normalizedDensity;
        worstSe = s.stdError;
      }
    }
    r.table.rows.push_back({I(d), std::string("bounded"), I(configs), worst, std::string(), worstSe, seedCell(cfg)});
    bounded.x.push_back(d);
    bounded.y.push_back(worst);

    NearDiagonalOptions mc;
    mc.mcBudget = cfg.mcBudget;
    mc.forceMonteCarlo = true;
    double cross = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double u = rng.uniform(0.0, FSGeometry::totalLength());
      const double v = FSGeometry::wrap(u + rng.uniform(thr, FSGeometry::totalLength() - thr));
      const std::vector<double> pts{u, v};
      const double exact = densityK(k, pts, 0, RandomStream(1)).value;
      const DensityValue nd = nearDiagonalDensity(k, Configuration{d, pts}, rng.substream(configs + i), mc);
      cross = std::max(cross, std::abs(nd.value - exact) / nd.stdError);
    }
    r.table.rows.push_back({I(d), std::string("cross"), I(20), cross, tol::kCrossSigmas, 0.0, seedCell(cfg)});
    r.checks.push_back({fmt("two formulations agree d=%d", d), cross <= tol::kCrossSigmas,
                        "max |difference| / se = " + formatNumber(cross), fmt("<= %g", tol::kCrossSigmas)});
  }
  r.plot = {"Two-point density near the diagonal", "eps (scaled units)", "rho_2(x, x + eps)", true, true, vanishing};
  return r;
}

// Columns: k, a, aStderr, b, bStderr, C, chi2, dof, centralSlope, seed.
// centralSlope is the log-log slope of E[(n - sqrt d)^k] / sqrt(d)^(k-1).
RunReport runFitCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "fit";
  r.table.columns = {"k", "a", "aStderr", "b", "bStderr", "C", "chi2", "dof", "centralSlope", "seed"};
  const int kmax = std::max(cfg.kmaxOr(3), 2);
  const auto reports = momentGrid(cfg, std::min(kmax, 5), 0);
  std::vector<Series> series;
  for (int k = 1; k <= kmax; ++k) {
    const FitResult f = fitAsymptotics(reports, k);
    const Cell slope = k >= 2 ? Cell(centralMomentDecay(reports, k).logLogSlope) : Cell(std::string());
    r.table.rows.push_back({I(k), f.a, f.aStdError, f.b, f.bStdError, f.C(), f.chi2, I(f.dof), slope, seedCell(cfg)});
    if (k == 1) {
      r.checks.push_back({"a_1", f.a >= tol::kA1Lo && f.a <= tol::kA1Hi, "a_1=" + formatNumber(f.a),
                          fmt("[%g, %g]", tol::kA1Lo, tol::kA1Hi)});
    }
    if (k == 2) {
      r.checks.push_back({"a_2", f.a >= tol::kA2Lo && f.a <= tol::kA2Hi, "a_2=" + formatNumber(f.a),
                          fmt("[%g, %g]", tol::kA2Lo, tol::kA2Hi)});
      r.checks.push_back({"C > 0", f.bLow() > 0.0,
                          fmt("C=%s, b_2 95%% CI [%s, %s]", formatNumber(f.C()).c_str(),
                              formatNumber(f.bLow()).c_str(), formatNumber(f.bHigh()).c_str()),
                          "CI excludes 0"});
    }
  }
  for (int k = 2; k <= kmax; ++k) {
    const TrendRecord t = centralMomentDecay(reports, k);
    Series s{fmt("k=%d", k), {}, {}, true};
    for (std::size_t i = 0; i < t.degrees.size(); ++i) {
      s.x.push_back(t.degrees[i]);
      s.y.push_back(t.normalized[i]);
    }
    series.push_back(s);
  }
  r.plot = {"Central moments / sqrt(d)^(k-1)", "degree d", "normalized central moment", true, false, series};
  return r;
}

// Columns: d, N, bins, chiSquare, pValue, aborts, meanRootFraction,
// maxCellError, pairMoment, seed.
RunReport runComplexCommand(const RunConfig& cfg) {
  RunReport r;
  r.table.name = "complex";
  r.table.columns = {"d",     "N",           "bins",     "chiSquare", "pValue",
                     "aborts", "meanRootFraction", "maxCellError", "pairMoment", "seed"};
  const int bins = cfg.gridOr(32);
  Series err{"max cell error", {}, {}, false};
  nlohmann::json cells = nlohmann::json::object();
  for (int d : cfg.degrees) {
    const EquidistReport e = complexEquidistribution(d, cfg.samples, bins, degreeSeed(cfg, d), cfg.threads);
    r.table.rows.push_back({I(d), I(e.samples), I(bins), e.chiSquare, e.pValue, I(e.aborts), e.meanRootFraction,
                            e.maxCellError, e.pairMoment, I(degreeSeed(cfg, d))});
    r.checks.push_back({fmt("uniform zeros d=%d", d), e.pValue > tol::kChiSquarePValue,
                        "p=" + formatNumber(e.pValue), fmt("> %g", tol::kChiSquarePValue)});
    r.checks.push_back({fmt("d roots per sample d=%d", d), e.meanRootFraction == 1.0,
                        "mean fraction " + formatNumber(e.meanRootFraction), "exactly 1"});
    cells[std::to_string(d)] = {{"bands", e.bands}, {"sectors", e.sectors}, {"counts", e.binCounts}};
    err.x.push_back(d);
    err.y.push_back(e.maxCellError);
  }
  r.extra["cells"] = cells;
  r.plot = {"Complex zeros: largest cell error", "degree d", "max |empirical - area|", true, true, {err}};
  return r;
}

}  // namespace kaclab::cli
