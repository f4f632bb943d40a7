#include "kaclab/ensemble.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "kaclab/error.hpp"
#include "kaclab/kernels.hpp"

namespace kaclab {

namespace {

std::vector<double> computeWeights(int d) {
  std::vector<double> w(d + 1);
  const double lgd = std::lgamma(d + 1.0);
  for (int k = 0; k <= d; ++k) {
    w[k] = std::exp(0.5 * (lgd - std::lgamma(k + 1.0) - std::lgamma(d - k + 1.0)));
  }
  // Exact for the endpoints.
  w[0] = w[d] = 1.0;
  return w;
}

// Horner for sum c[k] x^k and its derivative.
template <class T>
void horner(const std::vector<T>& c, T x, T& value, T& deriv) {
  value = T(0);
  deriv = T(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    deriv = deriv * x + value;
    value = value * x + *it;
  }
}

}  // namespace

const std::vector<double>& binomialWeights(int degree) {
  if (degree < 1) throw Error("degree must be at least 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[degree];
  if (!slot) slot = std::make_unique<const std::vector<double>>(computeWeights(degree));
  return *slot;
}

std::vector<double> monomialCoefficients(const SectionSample& s) {
  const auto& w = binomialWeights(s.degree);
  std::vector<double> c(s.degree + 1);
  for (int k = 0; k <= s.degree; ++k) c[k] = s.re[k] * w[k];
  return c;
}

std::vector<std::complex<double>> monomialCoefficientsComplex(const SectionSample& s) {
  const auto& w = binomialWeights(s.degree);
  std::vector<std::complex<double>> c(s.degree + 1);
  for (int k = 0; k <= s.degree; ++k) c[k] = s.coefficient(k) * w[k];
  return c;
}

SectionSample sampleReal(int degree, RandomStream& rng) {
  if (degree < 1) throw Error("degree must be at least 1");
  SectionSample s;
  s.degree = degree;
  s.field = Field::Real;
  s.re.resize(degree + 1);
  for (double& a : s.re) a = rng.normal();
  return s;
}

SectionSample sampleComplex(int degree, RandomStream& rng) {
  if (degree < 1) throw Error("degree must be at least 1");
  SectionSample s;
  s.degree = degree;
  s.field = Field::Complex;
  s.re.resize(degree + 1);
  s.im.resize(degree + 1);
  const double scale = std::sqrt(0.5);
  for (int k = 0; k <= degree; ++k) {
    s.re[k] = scale * rng.normal();
    s.im[k] = scale * rng.normal();
  }
  return s;
}

SectionSample fromCoefficients(std::vector<double> a) {
  if (a.size() < 2) throw Error("a section needs degree >= 1");
  SectionSample s;
  s.degree = static_cast<int>(a.size()) - 1;
  s.re = std::move(a);
  return s;
}

double evaluate(const SectionSample& s, double t) {
  const auto c = monomialCoefficients(s);
  double v, dv;
  if (std::abs(t) <= 1.0) {
    horner(c, t, v, dv);
    return v;
  }
  std::vector<double> rev(c.rbegin(), c.rend());
  horner(rev, 1.0 / t, v, dv);
  return std::pow(t, s.degree) * v;
}

double evaluateDeriv(const SectionSample& s, double t) {
  const auto c = monomialCoefficients(s);
  double v, dv;
  if (std::abs(t) <= 1.0) {
    horner(c, t, v, dv);
    return dv;
  }
  // p(t) = t^d q(1/t)  =>  p'(t) = t^(d-2) (d t q(1/t) - q'(1/t))
  std::vector<double> rev(c.rbegin(), c.rend());
  horner(rev, 1.0 / t, v, dv);
  return std::pow(t, s.degree - 2) * (s.degree * t * v - dv);
}

double evaluateHomogeneous(const std::vector<double>& c, double theta) {
  const int d = static_cast<int>(c.size()) - 1;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  double v, dv;
  if (std::abs(cs) >= std::abs(sn)) {
    horner(c, sn / cs, v, dv);
    return std::pow(cs, d) * v;
  }
  std::vector<double> rev(c.rbegin(), c.rend());
  horner(rev, cs / sn, v, dv);
  return std::pow(sn, d) * v;
}

double evaluateNormalized(const SectionSample& s, double u) {
  const double theta = FSGeometry::angleFromArc(FSGeometry::wrap(u));
  const double f = evaluateHomogeneous(monomialCoefficients(s), theta);
  // f = cos^d(theta) p(tan theta); dividing out sign(cos)^d restores sign(p).
  return (std::cos(theta) < 0.0 && s.degree % 2 == 1) ? -f : f;
}

}  // namespace kaclab
