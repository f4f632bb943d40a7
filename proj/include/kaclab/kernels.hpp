#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace kaclab {

inline const double kSqrtPi = std::sqrt(std::numbers::pi);

// Covariance kernel K(x, y) of a centered Gaussian field on a line chart,
// with mixed partial derivatives d^a/dx^a d^b/dy^b K for a, b <= maxDerivOrder.
class KernelOracle {
 public:
  virtual ~KernelOracle() = default;

  virtual double operator()(double x, double y, int a, int b) const = 0;
  double value(double x, double y) const { return (*this)(x, y, 0, 0); }

  virtual int maxDerivOrder() const = 0;
  virtual std::string description() const = 0;

  // Distance over which the correlation decays by O(1); used to pick
  // confluence thresholds for divided differences.
  virtual double lengthScale() const = 0;
};

// Kernel of the form K(x, y) = g(x - y).
class StationaryKernel : public KernelOracle {
 public:
  double operator()(double x, double y, int a, int b) const final;
  // n-th derivative of the profile g at tau.
  virtual double profile(double tau, int n) const = 0;
};

// Unit-variance Kostlan field of degree d, i.e. the degree-d polynomial with
// coefficients sqrt(C(d,k)) * N(0,1) divided by its pointwise standard
// deviation. In the angle chart the correlation is cos^d(theta - phi).
//
// Two charts are provided:
//  * ArcLength: u with theta = sqrt(pi) * u, so RP^1 has length sqrt(pi).
//  * Scaled: T = sqrt(d) * theta, with the Bergman normalization
//    (d + 1) / (pi d); this is the scaled kernel compared with Bargmann-Fock.
class KostlanKernel : public StationaryKernel {
 public:
  enum class Chart { ArcLength, Scaled };

  KostlanKernel(int degree, int maxDerivOrder, Chart chart = Chart::ArcLength);

  double profile(double tau, int n) const override;
  int maxDerivOrder() const override { return maxOrder_; }
  std::string description() const override;
  double lengthScale() const override;

  int degree() const { return degree_; }
  Chart chart() const { return chart_; }

  // n-th derivative of cos^d at angle theta (no chart scaling).
  double cosPowerDerivative(double theta, int n) const;

 private:
  int degree_;
  int maxOrder_;
  Chart chart_;
  double amplitude_;    // value at tau = 0
  double angleScale_;   // theta = angleScale_ * tau
  // coeffs_[n][m]: d^n/dtheta^n cos^d = sum_m coeffs_[n][m] cos^(d-m) sin^m.
  std::vector<std::vector<double>> coeffs_;
};

// Real Bargmann-Fock kernel (1/pi) exp(-(Z - W)^2 / 2).
class BargmannFockKernel : public StationaryKernel {
 public:
  explicit BargmannFockKernel(int maxDerivOrder = 8);
  double profile(double tau, int n) const override;
  int maxDerivOrder() const override { return maxOrder_; }
  std::string description() const override { return "bargmann-fock"; }
  double lengthScale() const override { return 1.0; }

 private:
  int maxOrder_;
};

std::shared_ptr<const KostlanKernel> kostlanKernel(int degree, int maxDerivOrder = 8);
std::shared_ptr<const BargmannFockKernel> bargmannFockKernel(int maxDerivOrder = 8);

// Fubini-Study geometry of RP^1 in the normalization where its total length
// is sqrt(pi). Arc-length u lives in [0, sqrt(pi)); theta = sqrt(pi) u is the
// angle in [0, pi) and t = tan(theta) the affine coordinate.
struct FSGeometry {
  static double totalLength() { return kSqrtPi; }
  static double angleFromArc(double u) { return kSqrtPi * u; }
  static double arcFromAngle(double theta) { return theta / kSqrtPi; }
  // Affine coordinate; +-inf at u = sqrt(pi)/2.
  static double affineFromArc(double u);
  // Arc-length in [0, sqrt(pi)) of the affine point t (t = +-inf allowed).
  static double arcFromAffine(double t);
  // Reduce any real u to [0, sqrt(pi)).
  static double wrap(double u);
  // Length element |dV_h| in the affine chart: du/dt.
  static double lengthElementAffine(double t);
};

double geodesicDistance(double u, double v);
double farDiagonalThreshold(int degree, double cPrime = 1.0);

// Scaled Bergman kernel K_d(Z, W) = (1/d) K_d(Z/sqrt d, W/sqrt d) in scaled
// normal coordinates around basePoint (the result does not depend on it:
// the Fubini-Study metric is homogeneous).
double scaledKernel(int degree, double basePoint, double z, double w);

// sup over a gridN x gridN grid of [-R, R]^2 of |K_d - K_C| and, for
// derivOrder > 0, of all mixed derivatives of total order <= derivOrder.
double bergmanDeviation(int degree, double radius, int gridN, int derivOrder = 0);

}  // namespace kaclab
