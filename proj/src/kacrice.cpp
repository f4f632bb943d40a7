#include "kaclab/kacrice.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "kaclab/error.hpp"
#include "kaclab/gaussian.hpp"
#include "kaclab/multijet.hpp"
#include "kaclab/parallel.hpp"

namespace kaclab {

namespace {

constexpr double kNearDiagonalRcond = 1e-10;

}  // namespace

DensityValue densityK(const KernelOracle& oracle, std::span<const double> x, long mcBudget,
                      RandomStream rng) {
  const int k = static_cast<int>(x.size());
  if (k < 1) throw Error("densityK needs at least one point");
  Eigen::MatrixXd joint(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      joint(i, j) = oracle(x[i], x[j], 0, 0);
      joint(k + i, j) = oracle(x[i], x[j], 1, 0);
      joint(i, k + j) = oracle(x[i], x[j], 0, 1);
      joint(k + i, k + j) = oracle(x[i], x[j], 1, 1);
    }
  }
  Eigen::VectorXd sd = joint.diagonal().cwiseMax(0.0).cwiseSqrt();
  if ((sd.array() <= 0.0).any()) throw NotPSD("zero variance in the value/derivative vector");
  Eigen::MatrixXd corr = sd.cwiseInverse().asDiagonal() * joint * sd.cwiseInverse().asDiagonal();
  corr = 0.5 * (corr + corr.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr.topLeftCorner(k, k), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > kNearDiagonalRcond * hi)) {
    std::ostringstream msg;
    msg << "value Gram reciprocal condition " << lo / hi << " at k=" << k;
    throw NearDiagonal(msg.str());
  }
  std::vector<int> valueIdx(k), derivIdx(k);
  std::iota(valueIdx.begin(), valueIdx.end(), 0);
  std::iota(derivIdx.begin(), derivIdx.end(), k);
  const CovMatrix cond = conditionOnZero(CovMatrix(corr), derivIdx, valueIdx);
  const MomentEstimate m = absMomentProduct(cond, mcBudget, rng);
  double logDen = 0.5 * k * std::log(2.0 * std::numbers::pi);
  logDen += 0.5 * eig.eigenvalues().array().log().sum();
  double derivScale = 1.0;
  for (int i = 0; i < k; ++i) {
    logDen += std::log(sd(i));
    derivScale *= sd(k + i);
  }
  const double den = std::exp(logDen);
  return {m.estimate * derivScale / den, m.stdError * derivScale / den};
}

double factorizationDefect(const KernelOracle& K, double u, double v) {
  const double A = K(u, u, 0, 0), C = K(v, v, 0, 0), B = K(u, v, 0, 0);
  const double e11 = K(u, u, 1, 0), e12 = K(u, v, 1, 0);
  const double e21 = K(u, v, 0, 1), e22 = K(v, v, 1, 0);
  const double l1 = K(u, u, 1, 1), l2 = K(v, v, 1, 1), b = K(u, v, 1, 1);
  const double r2 = B * B / (A * C);
  if (!(r2 < 1.0 - 1e-10)) throw NearDiagonal("points too close for the two-point factorization");
  const double tau1 = l1 - e11 * e11 / A;
  const double tau2 = l2 - e22 * e22 / C;
  // Components of s'(u), s'(v) along the unit vector of s(v), s(u) orthogonal
  // to the other value.
  const double p1 = (e12 - (B / A) * e11) / std::sqrt(C * (1.0 - r2));
  const double p2 = (e21 - (B / C) * e22) / std::sqrt(A * (1.0 - r2));
  const double s1sq = tau1 - p1 * p1;
  const double s2sq = tau2 - p2 * p2;
  const double det = A * C - B * B;
  const double cross = b - (e11 * (C * e21 - B * e22) + e12 * (-B * e21 + A * e22)) / det;
  double c = cross / std::sqrt(std::max(s1sq, 0.0) * std::max(s2sq, 0.0));
  c = std::clamp(c, -1.0, 1.0);
  // h(c) - 1 with h(c) = sqrt(1 - c^2) + c asin c.
  const double hm1 = c * std::asin(c) - c * c / (1.0 + std::sqrt(1.0 - c * c));
  const double logRatio = 0.5 * std::log1p(-p1 * p1 / tau1) + 0.5 * std::log1p(-p2 * p2 / tau2) +
                          std::log1p(hm1) - 0.5 * std::log1p(-r2);
  return std::expm1(logRatio);
}

// ---------------------------------------------------------------------------
// Quadrature.

namespace {

using Gauss8 = boost::math::quadrature::gauss<double, 8>;

struct Rule {
  std::vector<double> x, w;
};

// Composite 8-point Gauss-Legendre on [a, b] with `panels` panels.
Rule compositeRule(double a, double b, int panels) {
  Rule r;
  const auto& absc = Gauss8::abscissa();
  const auto& wts = Gauss8::weights();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < absc.size(); ++i) {
      r.x.push_back(mid - 0.5 * h * absc[i]);
      r.w.push_back(0.5 * h * wts[i]);
      if (absc[i] != 0.0) {
        r.x.push_back(mid + 0.5 * h * absc[i]);
        r.w.push_back(0.5 * h * wts[i]);
      }
    }
  }
  return r;
}

int panelsFor(int nodes) { return std::max(1, nodes / 8); }

double evalF(const TestFunction& f, std::span<const double> x) { return f ? f(x) : 1.0; }

struct Partial {
  double value = 0.0;
  double tube = 0.0;
  double var = 0.0;
};

Partial integrateOnce(int degree, int k, const TestFunction& f, const QuadSpec& spec, int nodes,
                      double eps) {
  const KostlanKernel kernel(degree, 8, KostlanKernel::Chart::ArcLength);
  const double L = kSqrtPi;
  const Rule ru = compositeRule(0.0, L, panelsFor(nodes));
  const std::size_t nu = ru.x.size();
  RandomStream master(spec.seed);
  NearDiagonalOptions nd;
  nd.mcBudget = spec.mcBudget;
  Partial total;

  if (k == 1) {
    // rho_1 is evaluated pointwise (its constancy is a checked property).
    std::vector<double> parts(nu);
    parallelFor(nu, spec.threads, [&](std::size_t i) {
      const double u = ru.x[i];
      parts[i] = ru.w[i] * evalF(f, std::span<const double>(&u, 1)) *
                 densityK(kernel, std::span<const double>(&u, 1), spec.mcBudget, master.substream(i)).value;
    });
    for (double p : parts) total.value += p;
    return total;
  }

  if (k == 2) {
    // (u, delta) coordinates, v = u + delta; rotation invariance makes the
    // density a function of delta alone.
    const Rule rd = compositeRule(eps, L - eps, panelsFor(nodes));
    std::vector<double> rho(rd.x.size());
    parallelFor(rd.x.size(), spec.threads, [&](std::size_t j) {
      const double pts[2] = {0.0, rd.x[j]};
      rho[j] = densityK(kernel, pts, spec.mcBudget, master.substream(j)).value;
    });
    Rule rt;  // tube: delta in (0, eps) and (L - eps, L)
    std::vector<double> rhoTube;
    if (spec.includeTube && eps > 0.0) {
      const int tubePanels = std::max(1, panelsFor(nodes) / 8);
      const Rule lo = compositeRule(0.0, eps, tubePanels);
      const Rule hi = compositeRule(L - eps, L, tubePanels);
      rt.x = lo.x;
      rt.w = lo.w;
      rt.x.insert(rt.x.end(), hi.x.begin(), hi.x.end());
      rt.w.insert(rt.w.end(), hi.w.begin(), hi.w.end());
      rhoTube.resize(rt.x.size());
      parallelFor(rt.x.size(), spec.threads, [&](std::size_t j) {
        Configuration cfg{degree, {0.0, rt.x[j]}};
        rhoTube[j] = nearDiagonalDensity(kernel, cfg, master.substream(1'000'000 + j), nd).value;
      });
    }
    std::vector<Partial> rows(nu);
    parallelFor(nu, spec.threads, [&](std::size_t i) {
      const double u = ru.x[i];
      Partial row;
      for (std::size_t j = 0; j < rd.x.size(); ++j) {
        const double pts[2] = {u, FSGeometry::wrap(u + rd.x[j])};
        row.value += rd.w[j] * evalF(f, pts) * rho[j];
      }
      for (std::size_t j = 0; j < rt.x.size(); ++j) {
        const double pts[2] = {u, FSGeometry::wrap(u + rt.x[j])};
        row.tube += rt.w[j] * evalF(f, pts) * rhoTube[j];
      }
      row.value *= ru.w[i];
      row.tube *= ru.w[i];
      rows[i] = row;
    });
    for (const auto& r : rows) {
      total.value += r.value;
      total.tube += r.tube;
    }
    return total;
  }

  // k == 3: (u, delta2, delta3); the density depends on the two gaps only.
  const Rule rd = compositeRule(0.0, L, panelsFor(nodes));
  const std::size_t nd2 = rd.x.size();
  std::vector<DensityValue> rho(nd2 * nd2);
  std::vector<char> inTube(nd2 * nd2, 0);
  parallelFor(nd2 * nd2, spec.threads, [&](std::size_t idx) {
    const double a = rd.x[idx / nd2], b = rd.x[idx % nd2];
    const double pts[3] = {0.0, a, b};
    const double gap = std::min({geodesicDistance(0.0, a), geodesicDistance(0.0, b), geodesicDistance(a, b)});
    if (gap < eps) {
      inTube[idx] = 1;
      if (!spec.includeTube) return;
      Configuration cfg{degree, {0.0, a, b}};
      rho[idx] = nearDiagonalDensity(kernel, cfg, master.substream(idx), nd);
      return;
    }
    rho[idx] = densityK(kernel, pts, spec.mcBudget, master.substream(idx));
  });
  std::vector<Partial> rows(nu);
  parallelFor(nu, spec.threads, [&](std::size_t i) {
    const double u = ru.x[i];
    Partial row;
    for (std::size_t idx = 0; idx < nd2 * nd2; ++idx) {
      const double a = rd.x[idx / nd2], b = rd.x[idx % nd2];
      const double pts[3] = {u, FSGeometry::wrap(u + a), FSGeometry::wrap(u + b)};
      const double w = ru.w[i] * rd.w[idx / nd2] * rd.w[idx % nd2];
      const double fv = evalF(f, pts);
      const double contrib = w * fv * rho[idx].value;
      const double sd = w * fv * rho[idx].stdError;
      if (inTube[idx]) row.tube += contrib;
      else row.value += contrib;
      row.var += sd * sd;
    }
    rows[i] = row;
  });
  for (const auto& r : rows) {
    total.value += r.value;
    total.tube += r.tube;
    total.var += r.var;
  }
  return total;
}

}  // namespace

QuadResult integrateDensity(int degree, int k, const TestFunction& f, const QuadSpec& spec) {
  if (k < 1 || k > 3) throw QuadratureBudgetExceeded("tensor quadrature is limited to k <= 3");
  if (spec.nodes < 16) throw QuadratureBudgetExceeded("need at least 16 nodes per dimension");
  const double eps = (k == 1) ? 0.0
                     : (spec.tubeRadius >= 0.0 ? spec.tubeRadius : 0.1 * farDiagonalThreshold(degree, 1.0));
  const double evals = std::pow(static_cast<double>(spec.nodes), k - 1) *
                       (k >= 3 ? static_cast<double>(spec.mcBudget) : 1.0);
  if (evals > static_cast<double>(spec.maxEvaluations)) {
    std::ostringstream msg;
    msg << "k=" << k << " with " << spec.nodes << " nodes needs ~" << evals << " evaluations";
    throw QuadratureBudgetExceeded(msg.str());
  }
  const Partial fine = integrateOnce(degree, k, f, spec, spec.nodes, eps);
  const Partial coarse = integrateOnce(degree, k, f, spec, spec.nodes / 2, eps);
  QuadResult r;
  r.offTube = fine.value;
  r.tubeContribution = spec.includeTube ? fine.tube : 0.0;
  r.value = r.offTube + r.tubeContribution;
  r.richardsonDelta = std::abs(r.value - (coarse.value + (spec.includeTube ? coarse.tube : 0.0)));
  r.stdError = std::sqrt(fine.var);
  // |dV_h|^k volume of {some pair closer than eps}.
  if (k == 2) r.tubeVolume = kSqrtPi * 2.0 * eps;
  if (k == 3) {
    // Three points keep all pairwise distances >= eps iff all three circular
    // spacings are >= eps, which has probability (1 - 3 eps / L)^2.
    const double q = std::max(0.0, 1.0 - 3.0 * eps / kSqrtPi);
    r.tubeVolume = std::pow(kSqrtPi, 3) * (1.0 - q * q);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Partition algebra.

std::vector<SetPartition> setPartitions(int k) {
  if (k < 1 || k > 8) throw Error("setPartitions supports 1 <= k <= 8");
  std::vector<SetPartition> out;
  // Restricted growth strings a with a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(k, 0);
  for (;;) {
    SetPartition p;
    const int blocks = *std::max_element(a.begin(), a.end()) + 1;
    p.blocks.resize(blocks);
    for (int i = 0; i < k; ++i) p.blocks[a[i]].push_back(i);
    out.push_back(std::move(p));
    int i = k - 1;
    for (; i > 0; --i) {
      const int prefixMax = *std::max_element(a.begin(), a.begin() + i);
      if (a[i] <= prefixMax) break;
    }
    if (i == 0) break;
    ++a[i];
    std::fill(a.begin() + i + 1, a.end(), 0);
  }
  return out;
}

TestFunction pullback(const TestFunction& f, const SetPartition& p, int k) {
  std::vector<int> blockOf(k, -1);
  for (int b = 0; b < p.size(); ++b) {
    for (int i : p.blocks[b]) blockOf[i] = b;
  }
  return [f, blockOf, k](std::span<const double> y) {
    std::vector<double> x(k);
    for (int i = 0; i < k; ++i) x[i] = y[blockOf[i]];
    return evalF(f, x);
  };
}

double momentFromModified(int k, const std::function<double(const SetPartition&)>& modified) {
  double sum = 0.0;
  for (const auto& p : setPartitions(k)) sum += modified(p);
  return sum;
}

double momentFromModified(int k, const std::map<int, double>& modified) {
  double sum = 0.0;
  for (int m = 1; m <= k; ++m) {
    auto it = modified.find(m);
    if (it == modified.end()) {
      std::ostringstream msg;
      msg << "modified moment of order " << m << " is required for k=" << k;
      throw MissingTerm(msg.str());
    }
    sum += static_cast<double>(stirling2(k, m)) * it->second;
  }
  return sum;
}

std::int64_t stirling2(int k, int m) {
  if (k < 0 || m < 0 || m > k) return 0;
  std::vector<std::vector<std::int64_t>> s(k + 1, std::vector<std::int64_t>(k + 1, 0));
  s[0][0] = 1;
  for (int n = 1; n <= k; ++n) {
    for (int j = 1; j <= n; ++j) s[n][j] = j * s[n - 1][j] + s[n - 1][j - 1];
  }
  return s[k][m];
}

std::int64_t fallingFactorial(std::int64_t n, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r *= (n - i);
  return r;
}

}  // namespace kaclab
