#pragma once

#include <cstdint>
#include <vector>

namespace kaclab {

struct MomentRow {
  int k = 0;
  double raw = 0.0, rawStdError = 0.0;          // E[n^k]
  double central = 0.0, centralStdError = 0.0;  // about the sample mean (bias-corrected k=2,3)
  double centralLow = 0.0, centralHigh = 0.0;   // bootstrap 95% interval
  double centralTrue = 0.0, centralTrueStdError = 0.0;  // about the exact mean sqrt(d)
  double falling = 0.0, fallingStdError = 0.0;  // E[(n)_k]
};

struct MomentReport {
  int degree = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  int kmax = 0;
  std::vector<long> histogram;  // histogram[n] = #samples with n real zeros
  std::vector<MomentRow> rows;  // k = 1..kmax
  bool stirlingExact = true;    // n^k = sum_m S(k,m) (n)_m held for every sample
  long exactFallbacks = 0;      // samples counted by the rational Sturm path
  double seconds = 0.0;

  const MomentRow& row(int k) const { return rows.at(k - 1); }
};

// Streams N Kostlan samples of degree d through the real-root counter.
// Sample i uses the substream (seed, i), so the report does not depend on
// the thread count.
MomentReport runMoments(int degree, long samples, int kmax, std::uint64_t seed, unsigned threads = 1,
                        int bootstrap = 1000);

struct Proportion {
  double fraction = 0.0;
  double stdError = 0.0;
};

// Fraction of samples with |n - sqrt(d)| > c sqrt(d).
Proportion deviationProbability(const MomentReport& r, double c);
Proportion deviationProbability(int degree, long samples, double c, std::uint64_t seed,
                                unsigned threads = 1);

struct FitResult {
  int k = 0;
  double a = 0.0, b = 0.0;  // E[n^k] ~ a sqrt(d)^k + b sqrt(d)^(k-1)
  double aStdError = 0.0, bStdError = 0.0, covAB = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  std::vector<double> residuals;  // in units of the per-degree standard error
  double C() const { return b / 2.0; }
  double bLow() const { return b - 1.96 * bStdError; }
  double bHigh() const { return b + 1.96 * bStdError; }
};

// Weighted least squares over the reports (>= 4 degrees spanning a factor 8).
FitResult fitAsymptotics(const std::vector<MomentReport>& reports, int k);

struct TrendRecord {
  int k = 0;
  std::vector<int> degrees;
  std::vector<double> normalized;  // E[(n - sqrt d)^k] / sqrt(d)^(k-1)
  std::vector<double> stdErrors;
  double logLogSlope = 0.0;        // of |normalized| against d
  bool strictlyDecreasing = false;
};

TrendRecord centralMomentDecay(const std::vector<MomentReport>& reports, int k);

struct EquidistReport {
  int degree = 0;
  long samples = 0;
  int bands = 0, sectors = 0;
  std::vector<long> binCounts;
  long totalRoots = 0;
  long aborts = 0;
  double chiSquare = 0.0;
  double pValue = 0.0;
  double meanRootFraction = 0.0;   // (1/d) E[#roots on CP^1]
  double maxCellError = 0.0;       // max over cells |empirical - area|
  double pairMoment = 0.0;         // (1/d^2) E[sum_{i,j} z_i^2 z_j^2] (sphere heights)
  double pairMomentLimit = 1.0 / 9.0;
  double seconds = 0.0;
};

// Roots of complex Kostlan samples, binned into `bins` equal-area cells
// (latitude bands of equal height times longitude sectors).
EquidistReport complexEquidistribution(int degree, long samples, int bins, std::uint64_t seed,
                                       unsigned threads = 1);

}  // namespace kaclab
