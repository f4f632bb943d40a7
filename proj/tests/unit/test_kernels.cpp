#include "doctest.h"

#include <cmath>
#include <numbers>

#include "kaclab/error.hpp"
#include "kaclab/kernels.hpp"

using namespace kaclab;

namespace {

// Central difference of K in x (a) or y (b) at order one above the target.
double fdx(const KernelOracle& k, double x, double y, int a, int b, double h) {
  return (k(x + h, y, a, b) - k(x - h, y, a, b)) / (2 * h);
}

}  // namespace

TEST_CASE("Kostlan kernel values in arc length") {
  const KostlanKernel k(10, 4);
  CHECK(k.value(0.3, 0.3) == doctest::Approx(1.0));
  const double u = 0.2, v = 0.05;
  CHECK(k.value(u, v) == doctest::Approx(std::pow(std::cos(kSqrtPi * (u - v)), 10)).epsilon(1e-14));
  CHECK(k.value(u, v) == doctest::Approx(k.value(v, u)));
  // K_xy on the diagonal is pi d, so rho_1 = sqrt(pi d) / pi = sqrt(d / pi).
  CHECK(k(0.4, 0.4, 1, 1) == doctest::Approx(std::numbers::pi * 10));
  CHECK(k(0.4, 0.4, 1, 0) == doctest::Approx(0.0));
  CHECK(k.lengthScale() == doctest::Approx(1.0 / std::sqrt(std::numbers::pi * 10)));
}

TEST_CASE("Kostlan kernel derivatives match finite differences") {
  const KostlanKernel k(7, 4);
  const double h = 1e-5;
  for (double x : {0.0, 0.13, 0.9, 1.5}) {
    const double y = 0.21;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double scale = std::max(1.0, std::abs(k(x, y, a + 1, b)));
        CHECK(std::abs(fdx(k, x, y, a, b, h) - k(x, y, a + 1, b)) < 1e-6 * scale * 50);
      }
    }
  }
  for (double th : {0.1, 1.0, 2.5}) {
    const double d1 = (k.cosPowerDerivative(th + 1e-6, 2) - k.cosPowerDerivative(th - 1e-6, 2)) / 2e-6;
    CHECK(d1 == doctest::Approx(k.cosPowerDerivative(th, 3)).epsilon(1e-6));
  }
}

TEST_CASE("derivative order limits") {
  const KostlanKernel k(5, 2);
  CHECK_THROWS_AS(k(0.1, 0.2, 3, 0), InsufficientDerivOrder);
  CHECK_THROWS_AS(KostlanKernel(5, 9), DegreeTooLargeForOrder);
  CHECK_THROWS_AS(KostlanKernel(0, 2), DegreeTooLargeForOrder);
}

TEST_CASE("Bargmann-Fock kernel") {
  const BargmannFockKernel bf(4);
  const double z = 0.7, w = -0.4;
  CHECK(bf.value(z, w) == doctest::Approx(std::exp(-0.5 * (z - w) * (z - w)) / std::numbers::pi));
  CHECK(bf(z, z, 1, 1) == doctest::Approx(1.0 / std::numbers::pi));
  CHECK(bf(z, w, 1, 0) == doctest::Approx(-(z - w) * bf.value(z, w)));
  CHECK(fdx(bf, z, w, 1, 1, 1e-5) == doctest::Approx(bf(z, w, 2, 1)).epsilon(1e-6));
}

TEST_CASE("Fubini-Study geometry of the real projective line") {
  CHECK(FSGeometry::totalLength() == doctest::Approx(std::sqrt(std::numbers::pi)));
  for (double t : {-50.0, -1.0, 0.0, 0.3, 7.0}) {
    const double u = FSGeometry::arcFromAffine(t);
    CHECK(u >= 0.0);
    CHECK(u < FSGeometry::totalLength());
    CHECK(FSGeometry::affineFromArc(u) == doctest::Approx(t).epsilon(1e-12));
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    double step = FSGeometry::arcFromAffine(t + h) - FSGeometry::arcFromAffine(t - h);
    if (step < 0) step += FSGeometry::totalLength();  // across u = 0
    const double du = step / (2 * h);
    CHECK(du == doctest::Approx(FSGeometry::lengthElementAffine(t)).epsilon(1e-6));
  }
  CHECK(FSGeometry::wrap(-0.1) == doctest::Approx(FSGeometry::totalLength() - 0.1));
  CHECK(geodesicDistance(0.05, FSGeometry::totalLength() - 0.05) == doctest::Approx(0.1));
  CHECK(farDiagonalThreshold(100) == doctest::Approx(std::log(100.0) / 10.0));
  CHECK(farDiagonalThreshold(100, 2.0) == doctest::Approx(std::log(100.0) / 20.0));
}

TEST_CASE("scaled kernel approaches Bargmann-Fock") {
  const BargmannFockKernel bf;
  const double z = 0.8, w = -1.1;
  double prev = 1e9;
  for (int d : {50, 200, 800, 3200}) {
    const double dev = std::abs(scaledKernel(d, 0.0, z, w) - bf.value(z, w));
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-3);
  CHECK(scaledKernel(100, 0.3, z, w) == doctest::Approx(scaledKernel(100, 0.0, z, w)));
  CHECK_THROWS_AS(scaledKernel(4, 0.0, 3.2, 0.0), ChartOverflow);
  // The amplitude (d+1)/(pi d) fixes the sup deviation at the diagonal.
  CHECK(bergmanDeviation(100, 0.0, 1) == doctest::Approx(1.0 / (100 * std::numbers::pi)));
  CHECK(bergmanDeviation(100, 3.0, 20, 1) >= bergmanDeviation(100, 3.0, 20, 0));
}
