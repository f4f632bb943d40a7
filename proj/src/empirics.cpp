#include "kaclab/empirics.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "kaclab/ensemble.hpp"
#include "kaclab/error.hpp"
#include "kaclab/kacrice.hpp"
#include "kaclab/parallel.hpp"
#include "kaclab/random.hpp"
#include "kaclab/roots.hpp"

namespace kaclab {

namespace {

using i128 = __int128;

double seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

long double powl(long double x, int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Central moment of order k about the sample mean; k = 2, 3 bias-corrected.
double centralMoment(const std::vector<long>& hist, long n, int k) {
  long double mean = 0.0L;
  for (std::size_t v = 0; v < hist.size(); ++v) mean += static_cast<long double>(v) * hist[v];
  mean /= n;
  long double m = 0.0L;
  for (std::size_t v = 0; v < hist.size(); ++v) {
    if (hist[v]) m += powl(static_cast<long double>(v) - mean, k) * hist[v];
  }
  m /= n;
  const long double N = static_cast<long double>(n);
  if (k == 2 && n > 1) m *= N / (N - 1);
  if (k == 3 && n > 2) m *= N * N / ((N - 1) * (N - 2));
  return static_cast<double>(m);
}

struct MeanAndError {
  double mean, stdError;
};

// Mean and standard error of g(n) over the histogram.
template <class G>
MeanAndError histogramMean(const std::vector<long>& hist, long n, G g) {
  long double s1 = 0.0L, s2 = 0.0L;
  for (std::size_t v = 0; v < hist.size(); ++v) {
    if (!hist[v]) continue;
    const long double x = g(static_cast<long>(v));
    s1 += x * hist[v];
    s2 += x * x * hist[v];
  }
  const long double mean = s1 / n;
  const long double var = n > 1 ? std::max(0.0L, (s2 - n * mean * mean) / (n - 1)) : 0.0L;
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n))};
}

}  // namespace

MomentReport runMoments(int degree, long samples, int kmax, std::uint64_t seed, unsigned threads,
                        int bootstrap) {
  if (samples < 2) throw Error("runMoments needs at least 2 samples");
  if (kmax < 1 || kmax > 5) throw Error("kmax must lie in [1, 5]");
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> counts(samples);
  std::vector<char> exact(samples, 0);
  parallelFor(samples, threads, [&](std::size_t i) {
    RandomStream rng = RandomStream::forSample(seed, i);
    const SectionSample s = sampleReal(degree, rng);
    const RootCount rc = countRealRootsRP1(s);
    counts[i] = rc.total;
    exact[i] = rc.usedExact;
  });

  MomentReport r;
  r.degree = degree;
  r.samples = samples;
  r.seed = seed;
  r.kmax = kmax;
  r.histogram.assign(degree + 1, 0);
  for (long i = 0; i < samples; ++i) {
    ++r.histogram.at(counts[i]);
    r.exactFallbacks += exact[i];
  }
  // Per-sample Stirling identity in exact integers.
  for (std::size_t n = 0; n < r.histogram.size(); ++n) {
    if (!r.histogram[n]) continue;
    for (int k = 1; k <= kmax; ++k) {
      std::int64_t lhs = 1;
      for (int j = 0; j < k; ++j) lhs *= static_cast<std::int64_t>(n);
      std::int64_t rhs = 0;
      for (int m = 1; m <= k; ++m) rhs += stirling2(k, m) * fallingFactorial(static_cast<std::int64_t>(n), m);
      if (lhs != rhs) r.stirlingExact = false;
    }
  }

  const double mu = std::sqrt(static_cast<double>(degree));
  for (int k = 1; k <= kmax; ++k) {
    MomentRow row;
    row.k = k;
    // Raw moments from exact integer sums.
    i128 s1 = 0, s2 = 0;
    for (std::size_t n = 0; n < r.histogram.size(); ++n) {
      i128 p = 1;
      for (int j = 0; j < k; ++j) p *= static_cast<i128>(n);
      s1 += p * r.histogram[n];
      s2 += p * p * r.histogram[n];
    }
    const long double mean = static_cast<long double>(s1) / samples;
    const long double var =
        std::max(0.0L, (static_cast<long double>(s2) - samples * mean * mean) / (samples - 1));
    row.raw = static_cast<double>(mean);
    row.rawStdError = static_cast<double>(std::sqrt(var / samples));
    const auto ff = histogramMean(r.histogram, samples,
                                  [k](long n) { return static_cast<long double>(fallingFactorial(n, k)); });
    row.falling = ff.mean;
    row.fallingStdError = ff.stdError;
    const auto ct = histogramMean(r.histogram, samples, [k, mu](long n) { return powl(n - mu, k); });
    row.centralTrue = ct.mean;
    row.centralTrueStdError = ct.stdError;
    row.central = k == 1 ? 0.0 : centralMoment(r.histogram, samples, k);
    r.rows.push_back(row);
  }

  // Bootstrap intervals for the central moments.
  if (bootstrap > 0 && kmax >= 2) {
    RandomStream boot = RandomStream(seed).substream(0xB00757A9ULL + degree);
    std::uniform_int_distribution<long> pick(0, samples - 1);
    std::vector<std::vector<double>> reps(kmax + 1);
    std::vector<long> hist(r.histogram.size());
    for (int b = 0; b < bootstrap; ++b) {
      std::fill(hist.begin(), hist.end(), 0);
      for (long i = 0; i < samples; ++i) ++hist[counts[pick(boot.engine())]];
      for (int k = 2; k <= kmax; ++k) reps[k].push_back(centralMoment(hist, samples, k));
    }
    for (int k = 2; k <= kmax; ++k) {
      auto& v = reps[k];
      std::sort(v.begin(), v.end());
      double m = 0.0, m2 = 0.0;
      for (double x : v) {
        m += x;
        m2 += x * x;
      }
      m /= v.size();
      MomentRow& row = r.rows[k - 1];
      row.centralStdError = std::sqrt(std::max(0.0, m2 / v.size() - m * m));
      row.centralLow = v[static_cast<std::size_t>(0.025 * (v.size() - 1))];
      row.centralHigh = v[static_cast<std::size_t>(0.975 * (v.size() - 1))];
    }
  }
  r.seconds = seconds(start);
  return r;
}

Proportion deviationProbability(const MomentReport& r, double c) {
  if (!(c > 0.0)) throw Error("deviation threshold must be positive");
  const double mu = std::sqrt(static_cast<double>(r.degree));
  long hits = 0;
  for (std::size_t n = 0; n < r.histogram.size(); ++n) {
    if (std::abs(static_cast<double>(n) - mu) > c * mu) hits += r.histogram[n];
  }
  const double p = static_cast<double>(hits) / r.samples;
  return {p, std::sqrt(p * (1.0 - p) / r.samples)};
}

Proportion deviationProbability(int degree, long samples, double c, std::uint64_t seed, unsigned threads) {
  return deviationProbability(runMoments(degree, samples, 1, seed, threads, 0), c);
}

FitResult fitAsymptotics(const std::vector<MomentReport>& reports, int k) {
  if (reports.size() < 4) throw IllConditionedFit("need at least 4 degrees");
  int dmin = reports.front().degree, dmax = dmin;
  for (const auto& r : reports) {
    dmin = std::min(dmin, r.degree);
    dmax = std::max(dmax, r.degree);
    if (r.kmax < k) throw IllConditionedFit("report lacks the requested moment order");
  }
  if (dmax < 8 * dmin) throw IllConditionedFit("degree grid must span a factor 8");
  double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
  std::vector<double> x1, x2, y, se;
  for (const auto& r : reports) {
    const double rd = std::sqrt(static_cast<double>(r.degree));
    const MomentRow& row = r.row(k);
    const double e = std::max(row.rawStdError, 1e-12 * std::abs(row.raw) + 1e-300);
    x1.push_back(std::pow(rd, k));
    x2.push_back(std::pow(rd, k - 1));
    y.push_back(row.raw);
    se.push_back(e);
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = 1.0 / (se[i] * se[i]);
    s11 += w * x1[i] * x1[i];
    s12 += w * x1[i] * x2[i];
    s22 += w * x2[i] * x2[i];
    t1 += w * x1[i] * y[i];
    t2 += w * x2[i] * y[i];
  }
  const double det = s11 * s22 - s12 * s12;
  const double tr = s11 + s22;
  if (!(det > 1e-14 * tr * tr)) throw IllConditionedFit("normal equations are singular");
  FitResult f;
  f.k = k;
  f.a = (s22 * t1 - s12 * t2) / det;
  f.b = (s11 * t2 - s12 * t1) / det;
  f.aStdError = std::sqrt(s22 / det);
  f.bStdError = std::sqrt(s11 / det);
  f.covAB = -s12 / det;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double res = (y[i] - f.a * x1[i] - f.b * x2[i]) / se[i];
    f.residuals.push_back(res);
    f.chi2 += res * res;
  }
  f.dof = static_cast<int>(y.size()) - 2;
  return f;
}

TrendRecord centralMomentDecay(const std::vector<MomentReport>& reports, int k) {
  if (k < 2) throw Error("central moment decay needs k >= 2");
  TrendRecord t;
  t.k = k;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : reports) {
    const double scale = std::pow(std::sqrt(static_cast<double>(r.degree)), k - 1);
    const MomentRow& row = r.row(k);
    t.degrees.push_back(r.degree);
    t.normalized.push_back(row.centralTrue / scale);
    t.stdErrors.push_back(row.centralTrueStdError / scale);
    const double v = std::abs(t.normalized.back());
    if (v > 0.0) {
      const double lx = std::log(static_cast<double>(r.degree)), ly = std::log(v);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
  }
  if (n >= 2) t.logLogSlope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  t.strictlyDecreasing = t.normalized.size() >= 2;
  for (std::size_t i = 1; i < t.normalized.size(); ++i) {
    if (!(t.normalized[i] < t.normalized[i - 1])) t.strictlyDecreasing = false;
  }
  return t;
}

EquidistReport complexEquidistribution(int degree, long samples, int bins, std::uint64_t seed,
                                       unsigned threads) {
  if (bins < 1) throw Error("need at least one bin");
  const auto start = std::chrono::steady_clock::now();
  EquidistReport rep;
  rep.degree = degree;
  rep.samples = samples;
  rep.bands = 1;
  for (int b = 1; b * b <= bins; ++b) {
    if (bins % b == 0) rep.bands = b;
  }
  rep.sectors = bins / rep.bands;

  auto binOf = [&](const std::array<double, 3>& p) {
    int band = static_cast<int>(std::floor((p[2] + 1.0) * 0.5 * rep.bands));
    band = std::clamp(band, 0, rep.bands - 1);
    const double lon = std::atan2(p[1], p[0]) + std::numbers::pi;
    int sector = static_cast<int>(std::floor(lon / (2.0 * std::numbers::pi) * rep.sectors));
    sector = std::clamp(sector, 0, rep.sectors - 1);
    return band * rep.sectors + sector;
  };

  struct PerSample {
    std::vector<int> bins;
    double heightSq = 0.0;
    int roots = 0;
    bool aborted = false;
  };
  std::vector<PerSample> per(samples);
  parallelFor(samples, threads, [&](std::size_t i) {
    RandomStream rng = RandomStream::forSample(seed, i);
    const SectionSample s = sampleComplex(degree, rng);
    PerSample out;
    out.bins.assign(bins, 0);
    try {
      const RootList roots = complexRoots(s);
      for (const auto& z : roots.complex) {
        const auto p = toSphere(z);
        ++out.bins[binOf(p)];
        out.heightSq += p[2] * p[2];
        ++out.roots;
      }
      for (int j = 0; j < roots.atInfinity; ++j) {
        ++out.bins[binOf(sphereNorthPole())];
        out.heightSq += 1.0;
        ++out.roots;
      }
    } catch (const NoConvergence&) {
      out.aborted = true;
    }
    per[i] = std::move(out);
  });

  rep.binCounts.assign(bins, 0);
  double pairSum = 0.0;
  long used = 0;
  for (const auto& p : per) {
    if (p.aborted) {
      ++rep.aborts;
      continue;
    }
    ++used;
    rep.totalRoots += p.roots;
    for (int b = 0; b < bins; ++b) rep.binCounts[b] += p.bins[b];
    pairSum += (p.heightSq / degree) * (p.heightSq / degree);
  }
  if (used == 0) throw NoConvergence("every sample aborted");
  const double expected = static_cast<double>(rep.totalRoots) / bins;
  for (long c : rep.binCounts) {
    rep.chiSquare += (c - expected) * (c - expected) / expected;
    rep.maxCellError = std::max(rep.maxCellError,
                                std::abs(static_cast<double>(c) / rep.totalRoots - 1.0 / bins));
  }
  rep.pValue = bins > 1 ? boost::math::gamma_q(0.5 * (bins - 1), 0.5 * rep.chiSquare) : 1.0;
  rep.meanRootFraction = static_cast<double>(rep.totalRoots) / (static_cast<double>(degree) * used);
  rep.pairMoment = pairSum / used;
  rep.seconds = seconds(start);
  return rep;
}

}  // namespace kaclab
