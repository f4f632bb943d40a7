// Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hermite_oracle.hpp"
#include "kaclab/empirics.hpp"
#include "kaclab/kacrice.hpp"
#include "kaclab/kernels.hpp"
#include "kaclab/multijet.hpp"
#include "kaclab/roots.hpp"

using namespace kaclab;

namespace {

namespace tol {
constexpr long kSamples = 20000;
constexpr std::uint64_t kSeed = 20240601;
constexpr double kMeanSigmas = 3.0;
constexpr double kMeanBudgetSeconds = 600.0;
constexpr double kAnalyticMeanRel = 1e-6;
constexpr double kRho1FlatRel = 1e-8;
constexpr double kBridgeSigmas = 3.0;
constexpr double kA1Lo = 0.98, kA1Hi = 1.02;
constexpr double kA2Lo = 0.95, kA2Hi = 1.05;
constexpr double kB3OverB2Lo = 2.2, kB3OverB2Hi = 3.8;
constexpr double kVarianceStable = 0.15;
constexpr double kConcentrationC = 0.5;
constexpr double kBergmanRatioLo = 1.4, kBergmanRatioHi = 3.0;
constexpr double kBergmanRadius = 3.0;
constexpr int kBergmanGrid = 50;
constexpr double kFactorizationMax = 0.05;
constexpr double kVanishingFraction = 0.05;
constexpr double kBoundednessSlope = 0.05;
constexpr int kBoundednessConfigs = 1000;
constexpr long kBoundednessBudget = 20000;
constexpr double kCrossSigmas = 5.0;
constexpr long kCrossBudget = 100000;
constexpr double kDividedDifferenceRel = 1e-10;
constexpr int kDividedDifferenceCases = 1000;
constexpr double kChiSquarePValue = 0.01;
}  // namespace tol

const std::vector<int> kFitGrid{16, 25, 64, 100, 256, 400};

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const MomentReport& reportFor(const std::vector<MomentReport>& rs, int d) {
  for (const auto& r : rs) {
    if (r.degree == d) return r;
  }
  throw std::runtime_error("degree not in grid");
}

bool strictlyDecreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

void exactMean(const std::vector<MomentReport>& rs, double seconds) {
  bool ok = seconds <= tol::kMeanBudgetSeconds;
  std::string detail;
  for (int d : {16, 100, 400}) {
    const MomentRow& r = reportFor(rs, d).row(1);
    const double z = (r.raw - std::sqrt(d)) / r.rawStdError;
    ok = ok && std::abs(z) <= tol::kMeanSigmas;
    detail += fmt("d=%d mean=%.4f se=%.4f z=%+.2f; ", d, r.raw, r.rawStdError, z);
  }
  report(1, ok, detail + fmt("grid time %.1fs (|z| <= %.0f, <= %.0fs)", seconds, tol::kMeanSigmas,
                             tol::kMeanBudgetSeconds));
}

void analyticMean() {
  bool ok = true;
  std::string detail;
  QuadSpec q;
  q.nodes = 512;
  for (int d : {4, 25, 100}) {
    const double v = integrateDensity(d, 1, nullptr, q).value;
    const double rel = std::abs(v / std::sqrt(d) - 1.0);
    const KostlanKernel k(d, 2);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < q.nodes; ++i) {
      const double p[1] = {FSGeometry::totalLength() * i / q.nodes};
      const double r = densityK(k, p, 0, RandomStream(1)).value;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double flat = (hi - lo) / hi;
    ok = ok && rel <= tol::kAnalyticMeanRel && flat <= tol::kRho1FlatRel;
    detail += fmt("d=%d rel=%.1e flat=%.1e; ", d, rel, flat);
  }
  report(2, ok, detail + fmt("(rel <= %.0e, flat <= %.0e)", tol::kAnalyticMeanRel, tol::kRho1FlatRel));
}

void secondMomentBridge() {
  const int d = 50;
  const MomentReport mc = runMoments(d, tol::kSamples, 2, tol::kSeed + 3, 0, 0);
  QuadSpec q;
  double quadErr = 0.0;
  const double analytic = momentFromModified(2, [&](const SetPartition& p) {
    const QuadResult r = integrateDensity(d, p.size(), nullptr, q);
    quadErr += r.richardsonDelta + r.stdError;
    return r.value;
  });
  const double se = std::hypot(mc.row(2).rawStdError, quadErr);
  const double z = (mc.row(2).raw - analytic) / se;
  report(3, std::abs(z) <= tol::kBridgeSigmas,
         fmt("d=50 MC E[n^2]=%.4f analytic=%.4f combined se=%.4f z=%+.2f (|z| <= %.0f)", mc.row(2).raw,
             analytic, se, z, tol::kBridgeSigmas));
}

void asymptoticFit(const std::vector<MomentReport>& rs) {
  const FitResult f1 = fitAsymptotics(rs, 1), f2 = fitAsymptotics(rs, 2), f3 = fitAsymptotics(rs, 3);
  const double ratio = f3.b / f2.b;
  const bool ok = f1.a >= tol::kA1Lo && f1.a <= tol::kA1Hi && f2.a >= tol::kA2Lo && f2.a <= tol::kA2Hi &&
                  f2.C() > 0.0 && f2.bLow() > 0.0 && ratio >= tol::kB3OverB2Lo && ratio <= tol::kB3OverB2Hi;
  report(4, ok,
         fmt("a1=%.4f a2=%.4f C=%.4f b2 CI=[%.4f, %.4f] b3/b2=%.3f (b3=%.3f+-%.3f) "
             "(a1 in [%.2f,%.2f], a2 in [%.2f,%.2f], CI > 0, b3/b2 in [%.1f,%.1f])",
             f1.a, f2.a, f2.C(), f2.bLow(), f2.bHigh(), ratio, f3.b, f3.bStdError, tol::kA1Lo, tol::kA1Hi,
             tol::kA2Lo, tol::kA2Hi, tol::kB3OverB2Lo, tol::kB3OverB2Hi));
}

void centralMoments(const std::vector<MomentReport>& rs) {
  const TrendRecord v = centralMomentDecay(rs, 2), t = centralMomentDecay(rs, 3);
  const double a = v.normalized[v.normalized.size() - 2], b = v.normalized.back();
  const bool stable = a > 0 && b > 0 && std::abs(a - b) / std::max(a, b) <= tol::kVarianceStable;
  std::string seq;
  for (std::size_t i = 0; i < v.degrees.size(); ++i) seq += fmt("%.4f ", v.normalized[i]);
  std::string third;
  for (std::size_t i = 0; i < t.degrees.size(); ++i) third += fmt("%.4f(%.4f) ", t.normalized[i], t.stdErrors[i]);
  report(5, stable && t.strictlyDecreasing,
         fmt("Var/sqrt(d): %s| m3/d: %s| stable=%d decreasing=%d (within %.0f%%)", seq.c_str(), third.c_str(),
             stable, t.strictlyDecreasing, 100 * tol::kVarianceStable));
}

void concentration(const std::vector<MomentReport>& rs) {
  std::vector<double> p;
  std::string detail;
  for (int d : {25, 100, 400}) {
    const Proportion q = deviationProbability(reportFor(rs, d), tol::kConcentrationC);
    p.push_back(q.fraction);
    detail += fmt("d=%d P=%.5f(%.5f) ", d, q.fraction, q.stdError);
  }
  report(6, strictlyDecreasing(p), detail + fmt("(c=%.1f, strictly decreasing)", tol::kConcentrationC));
}

void bergman() {
  std::vector<double> dev;
  for (int d : {100, 400, 1600}) dev.push_back(bergmanDeviation(d, tol::kBergmanRadius, tol::kBergmanGrid));
  const double ratio = dev[1] / dev[2];
  report(7, strictlyDecreasing(dev) && ratio >= tol::kBergmanRatioLo && ratio <= tol::kBergmanRatioHi,
         fmt("dev(100)=%.4e dev(400)=%.4e dev(1600)=%.4e ratio=%.3f (in [%.1f, %.1f])", dev[0], dev[1], dev[2],
             ratio, tol::kBergmanRatioLo, tol::kBergmanRatioHi));
}

double maxDefect(int d, std::uint64_t seed) {
  const KostlanKernel k(d, 2);
  const double thr = farDiagonalThreshold(d);
  RandomStream rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform(0.0, FSGeometry::totalLength());
    const double v = FSGeometry::wrap(u + rng.uniform(thr, FSGeometry::totalLength() - thr));
    worst = std::max(worst, std::abs(factorizationDefect(k, u, v)));
  }
  return worst;
}

void factorization() {
  const double a = maxDefect(100, tol::kSeed + 8), b = maxDefect(400, tol::kSeed + 8);
  report(8, a <= tol::kFactorizationMax && b < a,
         fmt("max defect d=100: %.3e, d=400: %.3e (<= %.2f, decreasing)", a, b, tol::kFactorizationMax));
}

void diagonal() {
  const int d = 100;
  const KostlanKernel k(d, 8);
  const double toArc = 1.0 / (kSqrtPi * std::sqrt(static_cast<double>(d)));
  std::vector<double> v;
  std::string detail;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    v.push_back(nearDiagonalDensity(k, Configuration{d, {0.4, 0.4 + eps * toArc}}, RandomStream(1)).value);
    detail += fmt("%.3e ", v.back());
  }
  const double rho1sq = d / std::numbers::pi;
  const bool vanish = strictlyDecreasing(v) && v.back() < tol::kVanishingFraction * rho1sq;

  std::vector<double> maxima;
  for (int dd : {25, 100, 400}) {
    const KostlanKernel kk(dd, 8);
    const double thr = 1.0 / std::sqrt(static_cast<double>(dd));
    RandomStream rng(tol::kSeed + 9);
    NearDiagonalOptions opt;
    opt.mcBudget = tol::kBoundednessBudget;
    double worst = 0.0;
    for (int i = 0; i < tol::kBoundednessConfigs; ++i) {
      const int kpts = 2 + static_cast<int>(rng.bits() % 2);
      std::vector<double> pts{rng.uniform(0.0, FSGeometry::totalLength())};
      for (int j = 1; j < kpts; ++j) {
        const bool cluster = rng.uniform() < 0.6;
        const double off = cluster ? rng.uniform(-1.0, 1.0) * thr : rng.uniform(0.0, FSGeometry::totalLength());
        pts.push_back(FSGeometry::wrap(pts[0] + off));
      }
      const ScalingDiagnostics s = scalingDiagnostics(kk, Configuration{dd, pts}, rng.substream(i), opt);
      worst = std::max(worst, s.normalizedDensity);
    }
    maxima.push_back(worst);
  }
  const double slope = std::log(maxima[2] / maxima[0]) / std::log(400.0 / 25.0);
  report(9, vanish && slope <= tol::kBoundednessSlope,
         fmt("rho2(eps) d=100: %s(< %.3f); max rho/sqrt(d)^k at d=25,100,400: %.4f %.4f %.4f slope=%+.4f "
             "(<= %.2f)",
             detail.c_str(), tol::kVanishingFraction * rho1sq, maxima[0], maxima[1], maxima[2], slope,
             tol::kBoundednessSlope));
}

void crossFormulation() {
  const int d = 100;
  const KostlanKernel k(d, 8);
  const double thr = 1.0 / std::sqrt(static_cast<double>(d));
  RandomStream rng(tol::kSeed + 10);
  NearDiagonalOptions opt;
  opt.mcBudget = tol::kCrossBudget;
  opt.forceMonteCarlo = true;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double u = rng.uniform(0.0, FSGeometry::totalLength());
    const double v = FSGeometry::wrap(u + rng.uniform(thr, FSGeometry::totalLength() - thr));
    const std::vector<double> pts{u, v};
    const double exact = densityK(k, pts, 0, RandomStream(1)).value;
    const DensityValue nd = nearDiagonalDensity(k, Configuration{d, pts}, rng.substream(i), opt);
    worst = std::max(worst, std::abs(nd.value - exact) / nd.stdError);
  }
  report(10, worst <= tol::kCrossSigmas,
         fmt("max |near-diagonal - standard| / se over 100 pairs = %.3f (<= %.0f)", worst, tol::kCrossSigmas));
}

void dividedDifferences() {
  std::mt19937_64 gen(tol::kSeed + 11);
  std::uniform_int_distribution<int> coef(-9, 9), mult(1, 3), grid(-64, 64), spread(0, 2), count(1, 6);
  double worst = 0.0;
  for (int trial = 0; trial < tol::kDividedDifferenceCases; ++trial) {
    const int total = count(gen);
    const double unit = spread(gen) == 0 ? 1.0 / 4096 : 1.0 / 32;
    std::vector<oracle::Node> nodes;
    std::vector<double> flat;
    int placed = 0;
    while (placed < total) {
      const int m = std::min(mult(gen), total - placed);
      const mpq_class x = mpq_class(grid(gen)) * mpq_class(unit);
      if (std::any_of(nodes.begin(), nodes.end(), [&](const oracle::Node& n) { return n.x == x; })) continue;
      nodes.push_back({x, m});
      for (int j = 0; j < m; ++j) flat.push_back(x.get_d());
      placed += m;
    }
    std::shuffle(flat.begin(), flat.end(), gen);
    const int degree = total - 1 + static_cast<int>(gen() % 4);
    std::vector<double> c(degree + 1);
    std::vector<mpq_class> cq(degree + 1);
    for (int i = 0; i <= degree; ++i) cq[i] = c[i] = coef(gen);
    FunctionOracle f;
    f.maxDerivOrder = 20;
    f.eval = [&c](double x, int n) {
      double r = 0;
      for (int i = static_cast<int>(c.size()) - 1; i >= n; --i) {
        double k = c[i];
        for (int m = 0; m < n; ++m) k *= i - m;
        r = r * x + k;
      }
      return r;
    };
    const double want = oracle::hermiteLeading(cq, nodes).get_d();
    worst = std::max(worst, std::abs(dividedDifference(flat, f) - want) / std::max(1.0, std::abs(want)));
    const double a = flat[0];
    const double two[2] = {a, a};
    const double slope = oracle::derivativeAt(cq, 1, mpq_class(a)).get_d();
    worst = std::max(worst, std::abs(dividedDifference(two, f) - slope) / std::max(1.0, std::abs(slope)));
  }
  report(11, worst <= tol::kDividedDifferenceRel,
         fmt("%d random cases, max relative error %.2e (<= %.0e)", tol::kDividedDifferenceCases, worst,
             tol::kDividedDifferenceRel));
}

void partitionIdentity() {
  std::vector<std::vector<SetPartition>> parts;
  for (int k = 1; k <= 5; ++k) parts.push_back(setPartitions(k));
  long mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    RandomStream rng = RandomStream::forSample(tol::kSeed + 12, i);
    const std::int64_t n = countRealRootsRP1(sampleReal(50, rng)).total;
    for (int k = 1; k <= 5; ++k) {
      std::int64_t power = 1, sum = 0;
      for (int j = 0; j < k; ++j) power *= n;
      for (const auto& p : parts[k - 1]) sum += fallingFactorial(n, p.size());
      mismatches += power != sum;
    }
  }
  report(12, mismatches == 0, fmt("1000 samples at d=50, k <= 5: %ld mismatches", mismatches));
}

void rootIntegrity() {
  long mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    RandomStream rng = RandomStream::forSample(tol::kSeed + 13, i);
    const SectionSample s = sampleReal(50, rng);
    const int sturm = countRealRootsRP1(s, CountMethod::ExactSturm).total;
    mismatches += sturm != static_cast<int>(isolateRealRoots(s).real.size());
  }
  long bad = 0;
  for (int i = 0; i < 100; ++i) {
    RandomStream rng = RandomStream::forSample(tol::kSeed + 14, i);
    const SectionSample s = sampleReal(50, rng);
    const RootList r = complexRoots(s);
    int real = 0, pairs = 0;
    for (const auto& z : r.complex) {
      if (z.imag() == 0.0) ++real;
      else if (z.imag() > 0.0) ++pairs;
    }
    const bool ok = r.conjugateClosed && real + 2 * pairs + r.atInfinity == 50 &&
                    static_cast<int>(r.complex.size()) + r.atInfinity == 50;
    bad += !ok;
  }
  report(13, mismatches == 0 && bad == 0,
         fmt("Sturm vs isolation on 1000 samples: %ld mismatches; real + 2 pairs != d on %ld of 100", mismatches,
             bad));
}

void equidistribution() {
  const EquidistReport big = complexEquidistribution(200, 500, 32, tol::kSeed + 14, 0);
  const EquidistReport small = complexEquidistribution(50, 500, 32, tol::kSeed + 14, 0);
  report(14, big.pValue > tol::kChiSquarePValue && big.maxCellError < small.maxCellError,
         fmt("d=200: chi2=%.2f p=%.4f aborts=%ld; cell error d=50: %.5f, d=200: %.5f (p > %.2f, decreasing)",
             big.chiSquare, big.pValue, big.aborts, small.maxCellError, big.maxCellError, tol::kChiSquarePValue));
}

}  // namespace

// With arguments, only the listed criteria run (e.g. `acceptance 9 13`).
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto wanted = [&](std::initializer_list<int> ids) {
    if (only.empty()) return true;
    for (int id : ids) {
      if (std::find(only.begin(), only.end(), id) != only.end()) return true;
    }
    return false;
  };
  const auto start = std::chrono::steady_clock::now();
  std::vector<MomentReport> grid;
  if (wanted({1, 4, 5, 6})) {
    for (int d : kFitGrid) grid.push_back(runMoments(d, tol::kSamples, 3, tol::kSeed + d, 0));
  }
  const double gridSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (wanted({1})) exactMean(grid, gridSeconds);
  if (wanted({2})) analyticMean();
  if (wanted({3})) secondMomentBridge();
  if (wanted({4})) asymptoticFit(grid);
  if (wanted({5})) centralMoments(grid);
  if (wanted({6})) concentration(grid);
  if (wanted({7})) bergman();
  if (wanted({8})) factorization();
  if (wanted({9})) diagonal();
  if (wanted({10})) crossFormulation();
  if (wanted({11})) dividedDifferences();
  if (wanted({12})) partitionIdentity();
  if (wanted({13})) rootIntegrity();
  if (wanted({14})) equidistribution();

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %d criteria failed (%.1fs)\n", failures, only.empty() ? 14 : static_cast<int>(only.size()), total);
  return failures == 0 ? 0 : 1;
}
