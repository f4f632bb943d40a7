#include "kaclab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kaclab/error.hpp"

namespace kaclab {

namespace {

constexpr int kMaxSupportedOrder = 8;

void requireOrder(int a, int b, int maxOrder) {
  if (a < 0 || b < 0 || a > maxOrder || b > maxOrder) {
    std::ostringstream msg;
    msg << "requested d^" << a << "/dx d^" << b << "/dy, oracle supports " << maxOrder;
    throw InsufficientDerivOrder(msg.str());
  }
}

}  // namespace

double StationaryKernel::operator()(double x, double y, int a, int b) const {
  requireOrder(a, b, maxDerivOrder());
  // d/dy of g(x - y) brings a factor -1 per derivative.
  const double v = profile(x - y, a + b);
  return (b % 2 == 0) ? v : -v;
}

KostlanKernel::KostlanKernel(int degree, int maxDerivOrder, Chart chart)
    : degree_(degree), maxOrder_(maxDerivOrder), chart_(chart) {
  if (degree < 1) throw DegreeTooLargeForOrder("degree must be at least 1");
  if (maxDerivOrder < 0 || maxDerivOrder > kMaxSupportedOrder) {
    throw DegreeTooLargeForOrder("derivative order must lie in [0, 8]");
  }
  const double d = degree;
  if (chart == Chart::ArcLength) {
    amplitude_ = 1.0;
    angleScale_ = kSqrtPi;
  } else {
    amplitude_ = (d + 1.0) / (std::numbers::pi * d);
    angleScale_ = 1.0 / std::sqrt(d);
  }
  // The mixed derivatives of order 2*maxOrder are needed by the oracle;
  // their size is about (angleScale * sqrt(d))^(2 maxOrder) d^maxOrder.
  const int top = 2 * maxOrder_;
  const double logSize = top * std::log(std::max(1.0, angleScale_ * d));
  if (logSize > 600.0) {
    std::ostringstream msg;
    msg << "degree " << degree << " with derivative order " << maxOrder_ << " overflows double";
    throw DegreeTooLargeForOrder(msg.str());
  }
  // d/dtheta [cos^(d-m) sin^m] = -(d-m) cos^(d-m-1) sin^(m+1) + m cos^(d-m+1) sin^(m-1)
  coeffs_.assign(top + 1, {});
  coeffs_[0] = {1.0};
  for (int n = 1; n <= top; ++n) {
    const auto& prev = coeffs_[n - 1];
    std::vector<double> next(std::min(n, degree) + 1, 0.0);
    for (int m = 0; m < static_cast<int>(prev.size()); ++m) {
      if (prev[m] == 0.0) continue;
      if (m < degree) next[m + 1] -= (degree - m) * prev[m];
      if (m > 0) next[m - 1] += m * prev[m];
    }
    coeffs_[n] = std::move(next);
  }
}

double KostlanKernel::cosPowerDerivative(double theta, int n) const {
  if (n < 0 || n >= static_cast<int>(coeffs_.size())) {
    throw InsufficientDerivOrder("cos^d derivative order out of range");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const auto& coeff = coeffs_[n];
  double sum = 0.0;
  double sinPow = 1.0;
  for (int m = 0; m < static_cast<int>(coeff.size()); ++m) {
    if (coeff[m] != 0.0) sum += coeff[m] * std::pow(c, degree_ - m) * sinPow;
    sinPow *= s;
  }
  return sum;
}

double KostlanKernel::profile(double tau, int n) const {
  return amplitude_ * std::pow(angleScale_, n) * cosPowerDerivative(angleScale_ * tau, n);
}

std::string KostlanKernel::description() const {
  std::ostringstream out;
  out << "kostlan(d=" << degree_ << (chart_ == Chart::ArcLength ? ",arc-length" : ",scaled") << ")";
  return out.str();
}

double KostlanKernel::lengthScale() const {
  return chart_ == Chart::ArcLength ? 1.0 / std::sqrt(std::numbers::pi * degree_) : 1.0;
}

BargmannFockKernel::BargmannFockKernel(int maxDerivOrder) : maxOrder_(maxDerivOrder) {
  if (maxDerivOrder < 0 || maxDerivOrder > kMaxSupportedOrder) {
    throw DegreeTooLargeForOrder("derivative order must lie in [0, 8]");
  }
}

double BargmannFockKernel::profile(double tau, int n) const {
  // g^(n)(tau) = (-1)^n He_n(tau) g(tau) with probabilists' Hermite He_n.
  double h0 = 1.0;
  double h1 = tau;
  double hn = n == 0 ? h0 : h1;
  for (int j = 1; j < n; ++j) {
    hn = tau * h1 - j * h0;
    h0 = h1;
    h1 = hn;
  }
  const double g = std::exp(-0.5 * tau * tau) / std::numbers::pi;
  return (n % 2 == 0 ? hn : -hn) * g;
}

std::shared_ptr<const KostlanKernel> kostlanKernel(int degree, int maxDerivOrder) {
  return std::make_shared<KostlanKernel>(degree, maxDerivOrder, KostlanKernel::Chart::ArcLength);
}

std::shared_ptr<const BargmannFockKernel> bargmannFockKernel(int maxDerivOrder) {
  return std::make_shared<BargmannFockKernel>(maxDerivOrder);
}

double FSGeometry::wrap(double u) {
  double r = std::fmod(u, kSqrtPi);
  if (r < 0.0) r += kSqrtPi;
  if (r >= kSqrtPi) r = 0.0;
  return r;
}

double FSGeometry::affineFromArc(double u) {
  const double theta = angleFromArc(wrap(u));
  if (theta == 0.5 * std::numbers::pi) return std::numeric_limits<double>::infinity();
  return std::tan(theta);
}

double FSGeometry::arcFromAffine(double t) {
  if (std::isinf(t)) return 0.5 * kSqrtPi;
  double theta = std::atan(t);
  if (theta < 0.0) theta += std::numbers::pi;
  return wrap(arcFromAngle(theta));
}

double FSGeometry::lengthElementAffine(double t) { return 1.0 / (kSqrtPi * (1.0 + t * t)); }

double geodesicDistance(double u, double v) {
  const double delta = FSGeometry::wrap(u - v);
  return std::min(delta, kSqrtPi - delta);
}

double farDiagonalThreshold(int degree, double cPrime) {
  return std::log(static_cast<double>(degree)) / (cPrime * std::sqrt(static_cast<double>(degree)));
}

double scaledKernel(int degree, double basePoint, double z, double w) {
  (void)basePoint;
  const double limit = 0.5 * std::numbers::pi * std::sqrt(static_cast<double>(degree));
  if (std::abs(z) > limit || std::abs(w) > limit) {
    throw ChartOverflow("scaled coordinate beyond pi*sqrt(d)/2");
  }
  const KostlanKernel k(degree, 0, KostlanKernel::Chart::Scaled);
  return k.value(z, w);
}

double bergmanDeviation(int degree, double radius, int gridN, int derivOrder) {
  const KostlanKernel kd(degree, std::max(derivOrder, 0), KostlanKernel::Chart::Scaled);
  const BargmannFockKernel kc(std::max(derivOrder, 0));
  const int n = (radius == 0.0) ? 1 : std::max(gridN, 1);
  std::vector<double> grid(n, 0.0);
  for (int i = 0; i < n && n > 1; ++i) grid[i] = -radius + 2.0 * radius * i / (n - 1);
  double worst = 0.0;
  for (double z : grid) {
    for (double w : grid) {
      for (int a = 0; a <= derivOrder; ++a) {
        for (int b = 0; a + b <= derivOrder; ++b) {
          worst = std::max(worst, std::abs(kd(z, w, a, b) - kc(z, w, a, b)));
        }
      }
    }
  }
  return worst;
}

}  // namespace kaclab
