#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "kaclab/kernels.hpp"
#include "kaclab/random.hpp"

namespace kaclab {

// k points on RP^1 in arc-length coordinates, for a field of degree d.
struct Configuration {
  int degree = 1;
  std::vector<double> points;
  int k() const { return static_cast<int>(points.size()); }
};

// A density per unit |dV_h|^k and its Monte Carlo standard error (0 when
// the numerator was evaluated in closed form).
struct DensityValue {
  double value = 0.0;
  double stdError = 0.0;
};

// k-point Kac-Rice density of the field with covariance `oracle` at
// pairwise distinct points:
//   rho_k = E[prod |s'(x_i)| | s(x) = 0] (2 pi)^(-k/2) det(Sigma_values)^(-1/2).
// Throws NearDiagonal when the value Gram has reciprocal condition number
// below 1e-10.
DensityValue densityK(const KernelOracle& oracle, std::span<const double> points, long mcBudget,
                      RandomStream rng);

// rho_2(u, v) / (rho_1(u) rho_1(v)) - 1, computed without cancellation.
double factorizationDefect(const KernelOracle& oracle, double u, double v);

struct QuadSpec {
  int nodes = 512;              // quadrature nodes per circle dimension
  int panelOrder = 8;           // Gauss-Legendre order per panel
  double tubeRadius = -1.0;     // < 0: (1/10) farDiagonalThreshold(d, 1)
  bool includeTube = true;      // add the near-diagonal contribution inside the tube
  long mcBudget = 20000;        // numerator budget when k >= 3
  std::uint64_t seed = 1;
  unsigned threads = 1;
  long maxEvaluations = 50'000'000;
};

struct QuadResult {
  double value = 0.0;             // total
  double offTube = 0.0;           // integral outside the diagonal tube
  double tubeContribution = 0.0;  // inside the tube (0 unless includeTube)
  double tubeVolume = 0.0;        // |dV_h|^k-volume of the excluded tube
  double richardsonDelta = 0.0;   // |value(nodes) - value(nodes/2)|
  double stdError = 0.0;          // Monte Carlo part of the error (k >= 3)
};

using TestFunction = std::function<double(std::span<const double>)>;

// Integral over (RP^1)^k of f * rho_k for a Kostlan field of degree d
// (k <= 3). The default f is 1.
QuadResult integrateDensity(int degree, int k, const TestFunction& f, const QuadSpec& spec);

struct SetPartition {
  std::vector<std::vector<int>> blocks;  // 0-based, blocks sorted by least element
  int size() const { return static_cast<int>(blocks.size()); }
};

// All Bell(k) partitions of {0..k-1} (k <= 8) in restricted-growth order.
std::vector<SetPartition> setPartitions(int k);

// Pullback of f along the diagonal inclusion j_I: (j_I^* f)(y) = f(x) with
// x_i = y_(block containing i).
TestFunction pullback(const TestFunction& f, const SetPartition& p, int k);

// E[nu^k](f) = sum over partitions I of E[tilde nu^|I|](j_I^* f).
double momentFromModified(int k, const std::function<double(const SetPartition&)>& modified);
// Symmetric version keyed by block count m: sum_m S(k, m) modified[m].
double momentFromModified(int k, const std::map<int, double>& modified);

// Stirling numbers of the second kind and falling factorials (exact).
std::int64_t stirling2(int k, int m);
std::int64_t fallingFactorial(std::int64_t n, int k);

}  // namespace kaclab
