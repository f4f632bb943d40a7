#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "kaclab/kacrice.hpp"
#include "kaclab/kernels.hpp"
#include "kaclab/random.hpp"

namespace kaclab {

// A function with derivatives: eval(x, n) = f^(n)(x) for n <= maxDerivOrder.
struct FunctionOracle {
  std::function<double(double, int)> eval;
  int maxDerivOrder = 0;
  double lengthScale = 1.0;  // distance over which f changes by O(1)
};

// Nodes closer than this fraction of the length scale are handled as one
// cluster through a Taylor expansion at the cluster mean instead of the
// recursive quotient, which cancels catastrophically for short gaps.
inline constexpr double kClusterFraction = 0.02;

// Confluent (Hermite) divided difference f[x_0, ..., x_n]. Repeated nodes
// give derivatives: f[z, ..., z] (p + 1 copies) = f^(p)(z) / p!.
double dividedDifference(std::span<const double> nodes, const FunctionOracle& f);

struct DividedDifferenceFunctional {
  enum class Kind { Value, Derivative };
  std::vector<double> nodes;  // derivative type: last node repeated
  Kind kind = Kind::Value;

  static DividedDifferenceFunctional value(std::vector<double> pts);
  static DividedDifferenceFunctional derivative(std::vector<double> pts);
};

struct GraphAssignment {
  int k = 0;
  double threshold = 0.0;
  bool circular = true;  // distances on RP^1 (arc-length) or on the real line
  std::vector<std::vector<char>> adjacency;
  std::vector<std::vector<int>> components;  // labels ascending, ordered by origin
  std::vector<int> origins;                  // least label per component
};

GraphAssignment assignGraph(std::span<const double> points, int degree);
GraphAssignment assignGraphWithThreshold(std::span<const double> points, double threshold,
                                         bool circular = true);
bool isAdmissible(const GraphAssignment& g);

struct Relabeling {
  std::vector<double> points;    // points[i] = original[permutation[i]]
  std::vector<int> permutation;
};
Relabeling admissibleRelabel(std::span<const double> points, int degree);

// Generalized evaluation functionals of a configuration, component-major.
struct FunctionalSystem {
  std::vector<DividedDifferenceFunctional> values;
  std::vector<DividedDifferenceFunctional> derivatives;
  std::vector<int> componentSizes;
};
FunctionalSystem functionalSystem(std::span<const double> points, const GraphAssignment& g);

// Cov(a(s), b(s)) = (a_x b_y) K(x, y), the bivariate divided difference.
double functionalCovariance(const KernelOracle& oracle, const DividedDifferenceFunctional& a,
                            const DividedDifferenceFunctional& b);
Eigen::MatrixXd functionalGram(const KernelOracle& oracle,
                               std::span<const DividedDifferenceFunctional> fs);

struct NearDiagonalOptions {
  long mcBudget = 100000;
  bool forceMonteCarlo = false;  // Monte Carlo numerator even when 2 or fewer factors
};

// Density N^Gamma / D^Gamma built from divided-difference functionals; valid
// on and near the diagonal. config.degree sets the graph threshold 1/sqrt(d)
// (use 1 for scaled coordinates). Points are taken on RP^1 for an
// arc-length Kostlan oracle and on the real line otherwise.
DensityValue nearDiagonalDensity(const KernelOracle& oracle, const Configuration& config,
                                 RandomStream rng, const NearDiagonalOptions& opt = {});

struct ScalingDiagnostics {
  double normalizedDensity = 0.0;         // rho / sqrt(d)^k
  double normalizedGramJacobian = 0.0;    // sqrt(det value Gram) * prod d^(-k_i(k_i-1)/4)
  double normalizedNumerator = 0.0;       // numerator * prod d^(-k_i(k_i+1)/4)
  double stdError = 0.0;                  // of normalizedDensity
};
ScalingDiagnostics scalingDiagnostics(const KernelOracle& oracle, const Configuration& config,
                                      RandomStream rng, const NearDiagonalOptions& opt = {});

// sqrt(det) of the value-functional Gram under the Bargmann-Fock kernel at
// scaled points T (graph threshold 1).
double localEvaluationJacobian(std::span<const double> scaledPoints, const GraphAssignment& g);

}  // namespace kaclab
