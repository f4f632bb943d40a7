#include "kaclab/multijet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "kaclab/error.hpp"
#include "kaclab/gaussian.hpp"

namespace kaclab {

namespace {

// f[y_0..y_n] for a tight cluster: Taylor expansion at the mean c,
//   sum_{j >= n} f^(j)(c) / j! * h_(j-n)(y - c),
// where h_r is the complete homogeneous symmetric polynomial of degree r.
// `tail` receives the size of the last two terms.
double clusterDD(std::span<const double> y, const FunctionOracle& f, int top, double* tail = nullptr) {
  const int n = static_cast<int>(y.size()) - 1;
  const double c = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  const int terms = top - n;
  // h[r] over the variables processed so far.
  std::vector<double> h(terms + 1, 0.0);
  h[0] = 1.0;
  for (double yi : y) {
    const double z = yi - c;
    for (int r = 1; r <= terms; ++r) h[r] += z * h[r - 1];
  }
  double sum = 0.0, last = 0.0;
  double factorial = std::tgamma(n + 1.0);
  for (int j = n; j <= top; ++j) {
    if (j > n) factorial *= j;
    const double hj = h[j - n];
    const double term = (j > n && hj == 0.0) ? 0.0 : f.eval(c, j) / factorial * hj;
    sum += term;
    if (j >= top - 1) last += std::abs(term);
  }
  if (tail) *tail = last;
  return sum;
}

}  // namespace

double dividedDifference(std::span<const double> nodesIn, const FunctionOracle& f) {
  if (nodesIn.empty()) throw Error("divided difference needs at least one node");
  std::vector<double> x(nodesIn.begin(), nodesIn.end());
  std::sort(x.begin(), x.end());
  const int n = static_cast<int>(x.size());
  const double clusterSpan = kClusterFraction * f.lengthScale;
  const double coincident = 1e-9 * f.lengthScale;

  // Needed derivative order: multiplicity - 1 for (numerically) repeated nodes.
  int run = 0;
  for (int i = 1; i < n; ++i) {
    run = (x[i] - x[i - 1] <= coincident) ? run + 1 : 0;
    if (run > f.maxDerivOrder) {
      std::ostringstream msg;
      msg << "node multiplicity " << run + 1 << " needs derivative order " << run
          << ", oracle supplies " << f.maxDerivOrder;
      throw InsufficientDerivOrder(msg.str());
    }
  }

  // table[i][j - i] = f[x_i .. x_j]
  std::vector<std::vector<double>> table(n);
  for (int i = 0; i < n; ++i) {
    table[i].assign(n - i, 0.0);
    table[i][0] = f.eval(x[i], 0);
  }
  for (int len = 1; len < n; ++len) {
    for (int i = 0; i + len < n; ++i) {
      const int j = i + len;
      const double span = x[j] - x[i];
      const bool canExpand = len <= f.maxDerivOrder;
      const auto sub = std::span<const double>(x).subspan(i, len + 1);
      if (span <= clusterSpan && canExpand) {
        table[i][len] = clusterDD(sub, f, std::min(f.maxDerivOrder, len + 12));
        continue;
      }
      // Wider spans still expand when the oracle's derivatives make the
      // series converge; the quotient loses about log10(1/span) digits per level.
      if (span <= f.lengthScale && f.maxDerivOrder >= len + 2) {
        double tail = 0.0;
        const double v = clusterDD(sub, f, f.maxDerivOrder, &tail);
        if (tail <= 1e-16 * std::abs(v)) {
          table[i][len] = v;
          continue;
        }
      }
      if (span > coincident) {
        table[i][len] = (table[i + 1][len - 1] - table[i][len - 1]) / span;
      } else {
        throw InsufficientDerivOrder("coincident nodes beyond the oracle's derivative order");
      }
    }
  }
  return table[0][n - 1];
}

DividedDifferenceFunctional DividedDifferenceFunctional::value(std::vector<double> pts) {
  if (pts.empty()) throw Error("functional needs nodes");
  return {std::move(pts), Kind::Value};
}

DividedDifferenceFunctional DividedDifferenceFunctional::derivative(std::vector<double> pts) {
  if (pts.empty()) throw Error("functional needs nodes");
  pts.push_back(pts.back());
  return {std::move(pts), Kind::Derivative};
}

GraphAssignment assignGraphWithThreshold(std::span<const double> points, double threshold,
                                         bool circular) {
  GraphAssignment g;
  g.k = static_cast<int>(points.size());
  g.threshold = threshold;
  g.circular = circular;
  auto distance = [circular](double a, double b) {
    return circular ? geodesicDistance(a, b) : std::abs(a - b);
  };
  g.adjacency.assign(g.k, std::vector<char>(g.k, 0));
  for (int i = 0; i < g.k; ++i) {
    for (int j = i + 1; j < g.k; ++j) {
      if (distance(points[i], points[j]) <= threshold) g.adjacency[i][j] = g.adjacency[j][i] = 1;
    }
  }
  std::vector<int> comp(g.k, -1);
  for (int start = 0; start < g.k; ++start) {
    if (comp[start] >= 0) continue;
    const int id = static_cast<int>(g.components.size());
    std::vector<int> members;
    std::vector<int> stack{start};
    comp[start] = id;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (int w = 0; w < g.k; ++w) {
        if (g.adjacency[v][w] && comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    g.origins.push_back(members.front());
    g.components.push_back(std::move(members));
  }
  return g;
}

GraphAssignment assignGraph(std::span<const double> points, int degree) {
  return assignGraphWithThreshold(points, 1.0 / std::sqrt(static_cast<double>(degree)));
}

bool isAdmissible(const GraphAssignment& g) {
  // Components must occupy consecutive label ranges, in order of origin.
  int next = 0;
  for (const auto& c : g.components) {
    for (int v : c) {
      if (v != next) return false;
      ++next;
    }
  }
  return true;
}

Relabeling admissibleRelabel(std::span<const double> points, int degree) {
  const GraphAssignment g = assignGraph(points, degree);
  Relabeling r;
  for (const auto& c : g.components) {
    for (int v : c) {
      r.permutation.push_back(v);
      r.points.push_back(points[v]);
    }
  }
  return r;
}

FunctionalSystem functionalSystem(std::span<const double> points, const GraphAssignment& g) {
  FunctionalSystem fs;
  for (const auto& comp : g.components) {
    // Points of a component are unwrapped next to the origin so the chart
    // never straddles the seam of the circle.
    const double origin = points[comp.front()];
    std::vector<double> local;
    for (int v : comp) {
      if (!g.circular) {
        local.push_back(points[v]);
        continue;
      }
      double delta = FSGeometry::wrap(points[v] - origin);
      if (delta > 0.5 * kSqrtPi) delta -= kSqrtPi;
      local.push_back(origin + delta);
    }
    fs.componentSizes.push_back(static_cast<int>(comp.size()));
    for (std::size_t p = 1; p <= local.size(); ++p) {
      std::vector<double> head(local.begin(), local.begin() + p);
      fs.values.push_back(DividedDifferenceFunctional::value(head));
      fs.derivatives.push_back(DividedDifferenceFunctional::derivative(head));
    }
  }
  return fs;
}

double functionalCovariance(const KernelOracle& oracle, const DividedDifferenceFunctional& a,
                            const DividedDifferenceFunctional& b) {
  const int order = oracle.maxDerivOrder();
  const double scale = oracle.lengthScale();
  FunctionOracle outer;
  outer.maxDerivOrder = order;
  outer.lengthScale = scale;
  outer.eval = [&](double x, int p) {
    FunctionOracle inner;
    inner.maxDerivOrder = order;
    inner.lengthScale = scale;
    inner.eval = [&oracle, x, p](double y, int q) { return oracle(x, y, p, q); };
    return dividedDifference(b.nodes, inner);
  };
  return dividedDifference(a.nodes, outer);
}

Eigen::MatrixXd functionalGram(const KernelOracle& oracle,
                               std::span<const DividedDifferenceFunctional> fs) {
  const int n = static_cast<int>(fs.size());
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      g(i, j) = g(j, i) = functionalCovariance(oracle, fs[i], fs[j]);
    }
  }
  return g;
}

namespace {

// Nested divided differences of a kernel with derivatives capped at order 8
// carry errors near 1e-9 in correlation units. When points nearly coincide
// the value and derivative functionals become nearly dependent, so the
// joint Gram has eigenvalues below that floor; those are clipped to zero.
constexpr double kGramRoundoff = 1e-7;

void clipRoundoff(Eigen::MatrixXd& corr) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  const double lo = eig.eigenvalues().minCoeff();
  if (lo >= 0.0) return;
  if (lo < -kGramRoundoff * eig.eigenvalues().cwiseAbs().maxCoeff()) {
    std::ostringstream msg;
    msg << "functional Gram has eigenvalue " << lo << " beyond divided-difference round-off";
    throw NotPSD(msg.str());
  }
  const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  corr = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  corr = 0.5 * (corr + corr.transpose());
}

struct NearDiagonalParts {
  DensityValue density;
  double logJacobian = 0.0;  // log sqrt(det value Gram)
  double numerator = 0.0;
  double numeratorStdError = 0.0;
  std::vector<int> componentSizes;
};

NearDiagonalParts nearDiagonalParts(const KernelOracle& oracle, const Configuration& config,
                                    RandomStream& rng, const NearDiagonalOptions& opt) {
  const int k = config.k();
  if (k < 1) throw Error("configuration needs at least one point");
  const auto* kostlan = dynamic_cast<const KostlanKernel*>(&oracle);
  const bool circular = kostlan && kostlan->chart() == KostlanKernel::Chart::ArcLength;
  const GraphAssignment g = assignGraphWithThreshold(
      config.points, 1.0 / std::sqrt(static_cast<double>(config.degree)), circular);
  const FunctionalSystem fs = functionalSystem(config.points, g);
  std::vector<DividedDifferenceFunctional> all = fs.values;
  all.insert(all.end(), fs.derivatives.begin(), fs.derivatives.end());
  Eigen::MatrixXd joint = functionalGram(oracle, all);

  // Work with the correlation matrix; the functionals have very different
  // scales (each divided-difference order brings a factor ~ 1/lengthScale).
  Eigen::VectorXd sd = joint.diagonal().cwiseMax(0.0).cwiseSqrt();
  if ((sd.array() <= 0.0).any()) throw NotPSD("functional with zero variance");
  Eigen::MatrixXd corr = sd.cwiseInverse().asDiagonal() * joint * sd.cwiseInverse().asDiagonal();
  corr = 0.5 * (corr + corr.transpose());
  clipRoundoff(corr);
  const CovMatrix jointCov(corr);

  std::vector<int> valueIdx(k), derivIdx(k);
  std::iota(valueIdx.begin(), valueIdx.end(), 0);
  std::iota(derivIdx.begin(), derivIdx.end(), k);
  const CovMatrix valueCorr(corr.topLeftCorner(k, k));
  const GaussianFactor vf = factor(valueCorr);
  if (!std::isfinite(vf.logDet)) throw SingularConditioning("value Gram is singular");
  const CovMatrix cond = conditionOnZero(jointCov, derivIdx, valueIdx);

  const auto method = opt.forceMonteCarlo ? AbsMomentMethod::MonteCarlo : AbsMomentMethod::Auto;
  const MomentEstimate m = absMomentProduct(cond, opt.mcBudget, rng, method);
  double derivScale = 1.0;
  double logValueScale = 0.0;
  for (int i = 0; i < k; ++i) {
    logValueScale += std::log(sd(i));
    derivScale *= sd(k + i);
  }
  NearDiagonalParts parts;
  parts.logJacobian = logValueScale + 0.5 * vf.logDet;
  parts.numerator = m.estimate * derivScale;
  parts.numeratorStdError = m.stdError * derivScale;
  const double denom = std::exp(0.5 * k * std::log(2.0 * std::numbers::pi) + parts.logJacobian);
  parts.density = {parts.numerator / denom, parts.numeratorStdError / denom};
  parts.componentSizes = fs.componentSizes;
  return parts;
}

}  // namespace

DensityValue nearDiagonalDensity(const KernelOracle& oracle, const Configuration& config,
                                 RandomStream rng, const NearDiagonalOptions& opt) {
  return nearDiagonalParts(oracle, config, rng, opt).density;
}

ScalingDiagnostics scalingDiagnostics(const KernelOracle& oracle, const Configuration& config,
                                      RandomStream rng, const NearDiagonalOptions& opt) {
  const NearDiagonalParts parts = nearDiagonalParts(oracle, config, rng, opt);
  const double d = config.degree;
  const int k = config.k();
  double logJacScale = 0.0, logNumScale = 0.0;
  for (int ki : parts.componentSizes) {
    logJacScale += 0.25 * ki * (ki - 1) * std::log(d);
    logNumScale += 0.25 * ki * (ki + 1) * std::log(d);
  }
  ScalingDiagnostics out;
  const double norm = std::pow(d, -0.5 * k);
  out.normalizedDensity = parts.density.value * norm;
  out.stdError = parts.density.stdError * norm;
  out.normalizedGramJacobian = std::exp(parts.logJacobian - logJacScale);
  out.normalizedNumerator = parts.numerator * std::exp(-logNumScale);
  return out;
}

double localEvaluationJacobian(std::span<const double> scaledPoints, const GraphAssignment& g) {
  const BargmannFockKernel bf(8);
  const FunctionalSystem fs = functionalSystem(scaledPoints, g);
  const Eigen::MatrixXd gram = functionalGram(bf, fs.values);
  const double det = gram.fullPivLu().determinant();
  return std::sqrt(std::max(det, 0.0));
}

}  // namespace kaclab
