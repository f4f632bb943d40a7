#include "kaclab/roots.hpp"

#include <unsupported/Eigen/FFT>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "kaclab/error.hpp"
#include "kaclab/kernels.hpp"
#include "sturm.hpp"

namespace kaclab {

namespace {

using cd = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void requireNonzero(const std::vector<double>& c) {
  if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; })) {
    throw ZeroPolynomial("all coefficients vanish");
  }
}

int nextPow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// ---------------------------------------------------------------------------
// Certified counting on the circle.
//
// f(theta) = sum_k c_k cos^(d-k) sin^k is a trigonometric polynomial of
// degree d. Its Fourier coefficients come from an FFT of exact-enough
// samples; f and f' on a fine grid come from a zero-padded inverse FFT.
// Each grid cell is certified with a second-order Taylor bound using
// B2 = sum m^2 |F_m| >= sup |f''|, subdividing cells that do not certify.
// Every floating-point quantity carries an explicit error allowance.

struct Bracket {
  double lo, hi;  // angles in [theta0, theta0 + pi]
};

class TrigCounter {
 public:
  explicit TrigCounter(const std::vector<double>& c) : c_(c), d_(static_cast<int>(c.size()) - 1) {}

  // Number of zeros in one period or nullopt when certification fails.
  std::optional<int> run(std::vector<Bracket>* brackets);

 private:
  struct Node {
    double theta, f, g;
  };
  Node evalAt(double theta) const;
  bool certify(const Node& a, const Node& b, int depth, int& roots, std::vector<Bracket>* out) const;

  std::vector<double> c_;
  int d_;
  std::vector<cd> spectrum_;  // F_m for m = -d..d at index m + d
  double deltaF_ = 0.0;       // sup error of computed f
  double deltaG_ = 0.0;       // sup error of computed f'
  double b2_ = 0.0;           // bound on |f''|
};

TrigCounter::Node TrigCounter::evalAt(double theta) const {
  // Direct Fourier sum; conjugate symmetry halves the work.
  double f = spectrum_[d_].real();
  double g = 0.0;
  for (int m = 1; m <= d_; ++m) {
    const cd& F = spectrum_[m + d_];
    if (F == cd(0.0)) continue;
    const double cm = std::cos(m * theta);
    const double sm = std::sin(m * theta);
    f += 2.0 * (F.real() * cm - F.imag() * sm);
    g += 2.0 * m * (-F.real() * sm - F.imag() * cm);
  }
  return {theta, f, g};
}

bool TrigCounter::certify(const Node& a, const Node& b, int depth, int& roots,
                          std::vector<Bracket>* out) const {
  if (std::abs(a.f) <= deltaF_ || std::abs(b.f) <= deltaF_) return false;
  const double h = b.theta - a.theta;
  if ((a.f > 0) == (b.f > 0)) {
    const double slackA = std::abs(a.f) - deltaF_ - (std::abs(a.g) + deltaG_) * 0.5 * h - b2_ * h * h / 8.0;
    const double slackB = std::abs(b.f) - deltaF_ - (std::abs(b.g) + deltaG_) * 0.5 * h - b2_ * h * h / 8.0;
    if (slackA > 0.0 && slackB > 0.0) return true;
  } else {
    // f' keeps its sign on each half, hence on the whole cell (the halves
    // meet at the midpoint, where both bounds hold), so exactly one zero.
    const bool sameSlope = (a.g > 0) == (b.g > 0);
    if (sameSlope && std::abs(a.g) - deltaG_ > b2_ * 0.5 * h &&
        std::abs(b.g) - deltaG_ > b2_ * 0.5 * h) {
      ++roots;
      if (out) out->push_back({a.theta, b.theta});
      return true;
    }
  }
  if (depth >= 48) return false;
  const Node mid = evalAt(0.5 * (a.theta + b.theta));
  return certify(a, mid, depth + 1, roots, out) && certify(mid, b, depth + 1, roots, out);
}

std::optional<int> TrigCounter::run(std::vector<Bracket>* brackets) {
  const int d = d_;
  const int n = nextPow2(2 * d + 2);
  // Samples over [0, 2 pi); f(theta + pi) = (-1)^d f(theta).
  std::vector<double> samples(n);
  for (int j = 0; j < n / 2; ++j) {
    samples[j] = evaluateHomogeneous(c_, 2.0 * std::numbers::pi * j / n);
    samples[j + n / 2] = (d % 2 == 0) ? samples[j] : -samples[j];
  }
  Eigen::FFT<double> fft;
  std::vector<cd> freq;
  fft.fwd(freq, samples);
  spectrum_.assign(2 * d + 1, cd(0.0));
  for (int m = -d; m <= d; ++m) {
    if ((m - d) % 2 != 0) continue;  // only frequencies of the parity of d occur
    spectrum_[m + d] = freq[(m + n) % n] / static_cast<double>(n);
  }
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (int m = -d; m <= d; ++m) {
    const double a = std::abs(spectrum_[m + d]);
    s0 += a;
    s1 += std::abs(m) * a;
    s2 += static_cast<double>(m) * m * a;
  }
  if (s0 == 0.0) throw ZeroPolynomial("all coefficients vanish");

  // Sample error: |sum c_k cos^(d-k) sin^k| terms are bounded by ||a||_2
  // (Cauchy-Schwarz against the binomial weights), Horner adds O(d) ulps.
  const auto& w = binomialWeights(d);
  double norm2 = 0.0;
  for (int k = 0; k <= d; ++k) norm2 += (c_[k] / w[k]) * (c_[k] / w[k]);
  const double sampleErr = 4.0 * (2.0 * d + 4.0 * std::log2(n) + 16.0) * kEps * std::sqrt(norm2);
  // Coefficient error vector has l2 norm <= sampleErr (Parseval); its trig
  // polynomial and derivatives are bounded through sum |m|^j.
  const double sqrtTerms = std::sqrt(2.0 * d + 1.0);
  const double errF = sqrtTerms * sampleErr;
  const double errG = sqrtTerms * d * sampleErr;
  const double errH = sqrtTerms * static_cast<double>(d) * d * sampleErr;

  // The grid starts at an irrational fraction of a cell so that structured
  // polynomials (roots at t = 0, +-1, ...) do not put a zero on a node.
  const int mGrid = 4 * n;
  const double theta0 = 0.3819660112501051 * 2.0 * std::numbers::pi / mGrid;
  std::vector<cd> padded(mGrid, cd(0.0)), paddedDeriv(mGrid, cd(0.0));
  for (int m = -d; m <= d; ++m) {
    const cd shifted = spectrum_[m + d] * std::polar(1.0, m * theta0);
    padded[(m + mGrid) % mGrid] = shifted;
    paddedDeriv[(m + mGrid) % mGrid] = shifted * cd(0.0, m);
  }
  std::vector<cd> values, derivs;
  fft.inv(values, padded);
  fft.inv(derivs, paddedDeriv);
  // Eigen's inverse transform divides by the length.
  const double scale = static_cast<double>(mGrid);
  const double roundF = 4.0 * std::log2(mGrid) * kEps * s0 + 2.0 * d * kEps * s0;
  const double roundG = 4.0 * std::log2(mGrid) * kEps * s1 + 2.0 * d * kEps * s1;

  deltaF_ = errF + roundF;
  deltaG_ = errG + roundG;
  b2_ = (s2 + errH) * (1.0 + 1e-12);

  int roots = 0;
  const int half = mGrid / 2;
  Node prev{theta0, values[0].real() * scale, derivs[0].real() * scale};
  for (int j = 1; j <= half; ++j) {
    Node cur;
    cur.theta = theta0 + ((j == half) ? std::numbers::pi : 2.0 * std::numbers::pi * j / mGrid);
    const int idx = j % mGrid;
    cur.f = values[idx].real() * scale;
    cur.g = derivs[idx].real() * scale;
    if (!certify(prev, cur, 0, roots, brackets)) return std::nullopt;
    prev = cur;
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Exact path.

struct ExactData {
  detail::ZPoly poly;
  detail::ZPoly squareFree;
  detail::ZPoly repeated;  // gcd(p, p')
};

ExactData exactData(const std::vector<double>& c) {
  ExactData e;
  e.poly = detail::fromDoubles(c);
  if (e.poly.empty()) throw ZeroPolynomial("all coefficients vanish");
  if (detail::degree(e.poly) == 0) {
    e.squareFree = e.poly;
    e.repeated = {1};
    return e;
  }
  e.repeated = detail::gcd(e.poly, detail::derivative(e.poly));
  e.squareFree = detail::degree(e.repeated) > 0 ? detail::exactQuotient(e.poly, e.repeated)
                                                : detail::primitivePart(e.poly);
  return e;
}

int exactCount(const std::vector<double>& c) {
  const auto poly = detail::fromDoubles(c);
  if (poly.empty()) throw ZeroPolynomial("all coefficients vanish");
  if (detail::degree(poly) == 0) return 0;
  return detail::SturmChain(poly).countAll();
}

double toDouble(const mpq_class& q) { return q.get_d(); }

// ---------------------------------------------------------------------------
// Refinement of a sign-change bracket in the affine coordinate.

double bisectAffine(const std::vector<double>& c, double ta, double tb, double tol) {
  auto value = [&](double t) {
    // Sign of cos^d-scaled p is what the bracket certifies; evaluate p in
    // the numerically safe chart.
    const int d = static_cast<int>(c.size()) - 1;
    if (std::abs(t) <= 1.0) {
      double v = 0.0;
      for (int k = d; k >= 0; --k) v = v * t + c[k];
      return v;
    }
    double v = 0.0;
    const double s = 1.0 / t;
    for (int k = 0; k <= d; ++k) v = v * s + c[k];
    return (d % 2 == 1 && t < 0.0) ? -v : v;
  };
  double fa = value(ta);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (ta + tb);
    if (tb - ta <= tol * std::max(1.0, std::abs(mid)) || mid <= ta || mid >= tb) break;
    const double fm = value(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (fa > 0)) {
      ta = mid;
      fa = fm;
    } else {
      tb = mid;
    }
  }
  return 0.5 * (ta + tb);
}

// Shrinks an angle bracket until it avoids theta = pi/2 (t = infinity).
Bracket avoidInfinity(const std::vector<double>& c, Bracket b) {
  const double halfPi = 0.5 * std::numbers::pi;
  for (int it = 0; it < 200 && b.lo < halfPi && b.hi > halfPi; ++it) {
    const double fl = evaluateHomogeneous(c, b.lo);
    const double fm = evaluateHomogeneous(c, halfPi);
    if (fm == 0.0) return {halfPi, halfPi};
    if ((fl > 0) == (fm > 0)) b.lo = std::nextafter(halfPi, 4.0);
    else b.hi = std::nextafter(halfPi, 0.0);
  }
  return b;
}

RootList listFromBrackets(const std::vector<double>& c, std::vector<Bracket> brackets, double tol) {
  RootList out;
  for (auto b : brackets) {
    // Brackets past pi describe the same affine points one period later.
    if (b.hi > std::numbers::pi) {
      b.lo -= std::numbers::pi;
      b.hi -= std::numbers::pi;
    }
    b = avoidInfinity(c, b);
    if (b.lo == b.hi && b.lo == 0.5 * std::numbers::pi) continue;  // root at infinity
    // The sign of cos^d flips across pi/2 for odd d, but never inside b.
    const double ta = std::tan(b.lo);
    const double tb = std::tan(b.hi);
    double t;
    if (b.hi <= 0.5 * std::numbers::pi || b.lo >= 0.5 * std::numbers::pi) {
      t = bisectAffine(c, std::min(ta, tb), std::max(ta, tb), tol);
    } else {
      t = std::tan(0.5 * (b.lo + b.hi));
    }
    out.real.push_back(t);
  }
  std::sort(out.real.begin(), out.real.end());
  out.multiple.assign(out.real.size(), false);
  return out;
}

// ---------------------------------------------------------------------------
// Complex roots.

// p(z) / p'(z) evaluated in the chart where Horner is stable.
cd newtonRatio(const std::vector<cd>& c, cd z) {
  const int d = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) {
    cd v = 0.0, dv = 0.0;
    for (int k = d; k >= 0; --k) {
      dv = dv * z + v;
      v = v * z + c[k];
    }
    return v / dv;
  }
  // p(z) = z^d q(s), s = 1/z, q(s) = sum c_(d-j) s^j;
  // p'(z) = z^(d-1) (d q(s) - s q'(s)).
  const cd s = 1.0 / z;
  cd q = 0.0, dq = 0.0;
  for (int k = 0; k <= d; ++k) {
    dq = dq * s + q;
    q = q * s + c[k];
  }
  return z * q / (static_cast<double>(d) * q - s * dq);
}

bool allConverged(const std::vector<bool>& done) {
  return std::all_of(done.begin(), done.end(), [](bool b) { return b; });
}

std::vector<cd> aberth(const std::vector<cd>& c, int& sweeps, bool& converged) {
  const int d = static_cast<int>(c.size()) - 1;
  // Initial guesses on a circle whose radius is the geometric mean of the
  // root moduli, with an irrational angular offset.
  const double radius = std::pow(std::abs(c[0]) / std::abs(c[d]), 1.0 / d);
  std::vector<cd> z(d);
  for (int j = 0; j < d; ++j) {
    const double ang = 2.0 * std::numbers::pi * (j + 0.25) / d + 0.4;
    z[j] = std::polar(radius > 0.0 && std::isfinite(radius) ? radius : 1.0, ang);
  }
  std::vector<bool> done(d, false);
  converged = false;
  for (sweeps = 0; sweeps < 200; ++sweeps) {
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      const cd ratio = newtonRatio(c, z[i]);
      cd sum = 0.0;
      for (int j = 0; j < d; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      const cd step = ratio / (1.0 - ratio * sum);
      z[i] -= step;
      if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag())) {
        return z;
      }
      if (std::abs(step) <= 4.0 * kEps * std::abs(z[i])) done[i] = true;
    }
    if (allConverged(done)) {
      converged = true;
      ++sweeps;
      break;
    }
  }
  return z;
}

std::vector<cd> companionRoots(const std::vector<cd>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) m(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<cd> z(d);
  for (int i = 0; i < d; ++i) z[i] = es.eigenvalues()(i);
  for (auto& r : z) {
    for (int it = 0; it < 5; ++it) {
      const cd step = newtonRatio(c, r);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
    }
  }
  return z;
}

double maxResidual(const std::vector<cd>& c, const std::vector<cd>& z) {
  double worst = 0.0;
  for (const auto& r : z) worst = std::max(worst, relativeResidual(c, r));
  return worst;
}

// Makes the root set of a real polynomial exactly conjugate-closed.
bool symmetrize(std::vector<cd>& z) {
  std::vector<cd> upper, lower, real;
  for (const auto& r : z) {
    const double y = 2.0 * r.imag() / (1.0 + std::norm(r));  // sphere coordinate
    if (std::abs(y) <= 1e-7) real.push_back(cd(r.real(), 0.0));
    else if (r.imag() > 0) upper.push_back(r);
    else lower.push_back(r);
  }
  if (upper.size() != lower.size()) return false;
  std::vector<bool> used(lower.size(), false);
  std::vector<cd> out = real;
  for (const auto& u : upper) {
    int best = -1;
    double bestDist = 0.0;
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(std::conj(lower[j]) - u);
      if (best < 0 || dist < bestDist) {
        best = static_cast<int>(j);
        bestDist = dist;
      }
    }
    used[best] = true;
    const cd avg = 0.5 * (u + std::conj(lower[best]));
    out.push_back(avg);
    out.push_back(std::conj(avg));
  }
  z = std::move(out);
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

RootCount countRealRootsMonomial(const std::vector<double>& c, CountMethod method) {
  requireNonzero(c);
  RootCount out;
  std::vector<double> trimmed = c;
  while (trimmed.size() > 1 && trimmed.back() == 0.0) {
    trimmed.pop_back();
    out.rootAtInfinity = true;
  }
  if (trimmed.size() == 1) return out;  // nonzero constant on the affine line
  if (method != CountMethod::ExactSturm && !out.rootAtInfinity) {
    if (auto n = TrigCounter(trimmed).run(nullptr)) {
      out.total = *n;
      return out;
    }
    if (method == CountMethod::Certified) throw NoConvergence("certified counter could not certify");
  }
  out.total = exactCount(trimmed);
  out.usedExact = true;
  return out;
}

RootCount countRealRootsRP1(const SectionSample& s, CountMethod method) {
  if (s.field != Field::Real) throw Error("real root counting needs a real sample");
  return countRealRootsMonomial(monomialCoefficients(s), method);
}

int countRealRootsInterval(const SectionSample& s, double u0, double u1, int* perturbations) {
  const auto c = monomialCoefficients(s);
  requireNonzero(c);
  const auto poly = detail::fromDoubles(c);
  if (detail::degree(poly) < 1) return 0;
  const detail::SturmChain chain(poly);
  int nudges = 0;
  if (u1 < u0) u1 += kSqrtPi * std::ceil((u0 - u1) / kSqrtPi);  // wrapping arc
  if (u1 - u0 >= kSqrtPi) {
    if (perturbations) *perturbations = 0;
    return chain.countAll();
  }
  if (u1 <= u0) {
    if (perturbations) *perturbations = 0;
    return 0;
  }
  // Endpoint as an exact rational affine point, nudged off exact roots.
  auto endpoint = [&](double u) -> std::optional<mpq_class> {
    const double theta = FSGeometry::angleFromArc(FSGeometry::wrap(u));
    if (theta == 0.5 * std::numbers::pi) return std::nullopt;  // infinity
    double t = std::tan(theta);
    for (int tries = 0; tries < 2; ++tries) {
      mpq_class q(t);
      if (detail::signAt(poly, q) != 0) return q;
      ++nudges;
      t = std::nextafter(t, std::numeric_limits<double>::infinity());
    }
    throw EndpointIsRoot("arc endpoint is a root even after perturbation");
  };
  const double theta0 = FSGeometry::angleFromArc(FSGeometry::wrap(u0));
  const double theta1 = theta0 + FSGeometry::angleFromArc(u1 - u0);
  const auto a = endpoint(u0);
  const auto b = endpoint(u1);
  const double halfPi = 0.5 * std::numbers::pi;
  // Does the forward walk from theta0 to theta1 cross t = infinity?
  const bool crosses = (theta0 < halfPi && theta1 > halfPi) || (theta0 >= halfPi && theta1 > halfPi + std::numbers::pi) ||
                       (!a.has_value());
  int count;
  const int vMinus = chain.variationsAtInfinity(-1);
  const int vPlus = chain.variationsAtInfinity(1);
  if (!a.has_value()) {
    // Starting at infinity: the walk covers (-inf, b].
    count = vMinus - (b ? chain.variations(*b) : vPlus);
  } else if (!b.has_value()) {
    count = chain.variations(*a) - vPlus;
  } else if (crosses) {
    count = (chain.variations(*a) - vPlus) + (vMinus - chain.variations(*b));
  } else {
    count = chain.count(*a, *b);
  }
  if (perturbations) *perturbations = nudges;
  return count;
}

RootCount countRealRootsPartition(const SectionSample& s, const std::vector<double>& breakpoints) {
  RootCount out;
  const std::size_t n = breakpoints.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = breakpoints[i];
    double hi = (i + 1 < n) ? breakpoints[i + 1] : breakpoints[0] + kSqrtPi;
    const int k = countRealRootsInterval(s, lo, hi);
    out.perInterval.push_back(k);
    out.total += k;
  }
  return out;
}

RootList isolateRealRootsExact(const std::vector<double>& c, double tol) {
  requireNonzero(c);
  std::vector<double> trimmed = c;
  while (trimmed.size() > 1 && trimmed.back() == 0.0) trimmed.pop_back();
  RootList out;
  if (trimmed.size() == 1) return out;
  const ExactData e = exactData(trimmed);
  auto intervals = detail::isolate(e.squareFree);
  for (auto& iv : intervals) {
    // Relative width target; bisection happens in exact arithmetic.
    const double mag = std::max({1.0, std::abs(toDouble(iv.lo)), std::abs(toDouble(iv.hi))});
    detail::refine(e.squareFree, iv, mpq_class(tol * mag * 0.5));
    const double root = iv.lo == iv.hi ? toDouble(iv.lo) : toDouble((iv.lo + iv.hi) / 2);
    out.real.push_back(root);
    bool multiple = false;
    if (detail::degree(e.repeated) > 0) {
      if (iv.lo == iv.hi) {
        multiple = detail::signAt(e.repeated, iv.lo) == 0;
      } else {
        multiple = detail::SturmChain(e.repeated).count(iv.lo, iv.hi) > 0;
      }
    }
    out.multiple.push_back(multiple);
  }
  return out;
}

RootList isolateRealRootsMonomial(const std::vector<double>& c, double tol) {
  requireNonzero(c);
  std::vector<double> trimmed = c;
  while (trimmed.size() > 1 && trimmed.back() == 0.0) trimmed.pop_back();
  if (trimmed.size() == 1) return {};
  std::vector<Bracket> brackets;
  if (TrigCounter(trimmed).run(&brackets)) {
    return listFromBrackets(trimmed, std::move(brackets), tol);
  }
  return isolateRealRootsExact(trimmed, tol);
}

RootList isolateRealRoots(const SectionSample& s, double tol) {
  if (s.field != Field::Real) throw Error("real root isolation needs a real sample");
  return isolateRealRootsMonomial(monomialCoefficients(s), tol);
}

double relativeResidual(const std::vector<cd>& c, cd z) {
  const int d = static_cast<int>(c.size()) - 1;
  cd v = 0.0;
  double scale = 0.0;
  if (std::abs(z) <= 1.0) {
    const double r = std::abs(z);
    for (int k = d; k >= 0; --k) {
      v = v * z + c[k];
      scale = scale * r + std::abs(c[k]);
    }
  } else {
    const cd s = 1.0 / z;
    const double r = std::abs(s);
    for (int k = 0; k <= d; ++k) {
      v = v * s + c[k];
      scale = scale * r + std::abs(c[k]);
    }
  }
  return scale == 0.0 ? 0.0 : std::abs(v) / scale;
}

RootList complexRootsMonomial(const std::vector<cd>& coeffs, bool realInput) {
  std::vector<cd> c = coeffs;
  RootList out;
  double biggest = 0.0;
  for (const auto& x : c) biggest = std::max(biggest, std::abs(x));
  if (biggest == 0.0) throw ZeroPolynomial("all coefficients vanish");
  // Only exactly vanishing leading coefficients are roots at infinity; the
  // binomial weights make a relative cut meaningless (they span 10^29 at d = 200).
  while (c.size() > 1 && c.back() == cd(0.0)) {
    c.pop_back();
    ++out.atInfinity;
  }
  if (c.size() == 1) return out;
  bool converged = false;
  std::vector<cd> z = aberth(c, out.sweeps, converged);
  constexpr double kResidualTol = 1e-8;
  if (!converged || maxResidual(c, z) > kResidualTol) {
    z = companionRoots(c);
    out.usedFallback = true;
    if (maxResidual(c, z) > kResidualTol) {
      throw NoConvergence("roots did not reach residual 1e-8 after companion fallback");
    }
  }
  if (realInput) out.conjugateClosed = symmetrize(z);
  std::sort(z.begin(), z.end(), [](const cd& a, const cd& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  out.complex = std::move(z);
  return out;
}

RootList complexRoots(const SectionSample& s) {
  return complexRootsMonomial(monomialCoefficientsComplex(s), s.field == Field::Real);
}

std::array<double, 3> toSphere(cd z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return sphereNorthPole();
  if (std::abs(z) > 1.0) {
    // Chart at infinity: w = 1/z, so |z|^2 never overflows.
    const cd w = 1.0 / z;
    const double r2 = std::norm(w);
    const double den = 1.0 + r2;
    return {2.0 * w.real() / den, -2.0 * w.imag() / den, (1.0 - r2) / den};
  }
  const double r2 = std::norm(z);
  const double den = 1.0 + r2;
  return {2.0 * z.real() / den, 2.0 * z.imag() / den, (r2 - 1.0) / den};
}

std::array<double, 3> sphereNorthPole() { return {0.0, 0.0, 1.0}; }

}  // namespace kaclab
