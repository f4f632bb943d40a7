#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hermite_oracle.hpp"
#include "kaclab/error.hpp"
#include "kaclab/multijet.hpp"

using namespace kaclab;

namespace {

FunctionOracle polynomialOracle(const std::vector<double>& c, int maxOrder = 20) {
  FunctionOracle f;
  f.maxDerivOrder = maxOrder;
  f.eval = [c](double x, int n) {
    double r = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= n; --i) {
      double coef = c[i];
      for (int m = 0; m < n; ++m) coef *= i - m;
      r = r * x + coef;
    }
    return r;
  };
  return f;
}

}  // namespace

TEST_CASE("divided differences against the Hermite oracle") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> coef(-5, 5), mult(1, 3), grid(-64, 64), spread(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<oracle::Node> nodes;
    std::vector<double> flat;
    const double unit = spread(gen) == 0 ? 1.0 / 4096 : 1.0 / 64;
    int total = 0;
    while (total < 6) {
      const int m = std::min(mult(gen), 6 - total);
      const int g = grid(gen);
      bool dup = false;
      for (const auto& n : nodes) dup |= n.x == mpq_class(g) * mpq_class(unit);
      if (dup) continue;
      nodes.push_back({mpq_class(g) * mpq_class(unit), m});
      for (int j = 0; j < m; ++j) flat.push_back(g * unit);
      total += m;
      if (gen() % 3 == 0) break;
    }
    const int degree = total - 1 + static_cast<int>(gen() % 4);
    std::vector<double> c(degree + 1);
    std::vector<mpq_class> cq(degree + 1);
    for (int i = 0; i <= degree; ++i) {
      c[i] = coef(gen);
      cq[i] = c[i];
    }
    std::shuffle(flat.begin(), flat.end(), gen);
    const double want = oracle::hermiteLeading(cq, nodes).get_d();
    const double got = dividedDifference(flat, polynomialOracle(c));
    CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("confluent nodes give derivatives") {
  FunctionOracle s;
  s.maxDerivOrder = 8;
  s.eval = [](double x, int n) {
    switch (n % 4) {
      case 0: return std::sin(x);
      case 1: return std::cos(x);
      case 2: return -std::sin(x);
      default: return -std::cos(x);
    }
  };
  for (double a : {-1.0, 0.0, 0.7}) {
    const double two[2] = {a, a};
    CHECK(dividedDifference(two, s) == doctest::Approx(std::cos(a)).epsilon(1e-10));
    const double three[3] = {a, a, a};
    CHECK(dividedDifference(three, s) == doctest::Approx(-std::sin(a) / 2).epsilon(1e-10));
    const double one[1] = {a};
    CHECK(dividedDifference(one, s) == doctest::Approx(std::sin(a)));
  }
  // Nearly coincident nodes stay accurate.
  const double close[2] = {0.3, 0.3 + 1e-12};
  CHECK(dividedDifference(close, s) == doctest::Approx(std::cos(0.3 + 5e-13)).epsilon(1e-11));
  FunctionOracle lowOrder = s;
  lowOrder.maxDerivOrder = 1;
  const double many[4] = {0.1, 0.1, 0.1, 0.1};
  CHECK_THROWS_AS(dividedDifference(many, lowOrder), InsufficientDerivOrder);
}

TEST_CASE("proximity graphs") {
  const double pts[4] = {0.5, 0.02, 0.55, 1.0};
  const GraphAssignment g = assignGraphWithThreshold(pts, 0.1);
  REQUIRE(g.components.size() == 3);
  CHECK(g.components[0] == std::vector<int>{0, 2});
  CHECK(g.components[1] == std::vector<int>{1});
  CHECK(g.components[2] == std::vector<int>{3});
  CHECK(g.origins == std::vector<int>{0, 1, 3});

  // Points on either side of u = 0 are neighbours on the circle only.
  const double wrap[2] = {0.01, FSGeometry::totalLength() - 0.01};
  CHECK(assignGraphWithThreshold(wrap, 0.1, true).components.size() == 1);
  CHECK(assignGraphWithThreshold(wrap, 0.1, false).components.size() == 2);

  const double chain[3] = {0.0, 0.08, 0.16};
  CHECK(assignGraphWithThreshold(chain, 0.1).components.size() == 1);

  const Relabeling r = admissibleRelabel(pts, 100);
  for (int i = 0; i < 4; ++i) CHECK(r.points[i] == pts[r.permutation[i]]);
  CHECK(isAdmissible(assignGraph(r.points, 100)));
}

TEST_CASE("near-diagonal density matches the standard formula off the diagonal") {
  const KostlanKernel k(100, 8);
  for (const auto& pts : std::vector<std::vector<double>>{{0.1, 0.4}, {0.2, 0.25}, {0.5, 0.52}}) {
    const DensityValue a = densityK(k, pts, 0, RandomStream(1));
    const DensityValue b = nearDiagonalDensity(k, Configuration{100, pts}, RandomStream(1));
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-7));
  }
}

TEST_CASE("two-point density vanishes linearly on the diagonal") {
  const KostlanKernel k(100, 8);
  double prev = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 0.0}) {
    const DensityValue r = nearDiagonalDensity(k, Configuration{100, {0.3, 0.3 + eps}}, RandomStream(1));
    if (eps == 0.0) {
      CHECK(r.value == doctest::Approx(0.0));
    } else if (prev > 0.0) {
      CHECK(prev / r.value == doctest::Approx(10.0).epsilon(0.02));
    }
    prev = r.value;
  }
}

TEST_CASE("local evaluation Jacobian at a double point") {
  const double pts[2] = {0.4, 0.4};
  const GraphAssignment g = assignGraphWithThreshold(pts, 1.0, false);
  // Value Gram of [x] and [x, x] under Bargmann-Fock: diag(1/pi, 1/pi).
  CHECK(localEvaluationJacobian(pts, g) == doctest::Approx(1.0 / std::numbers::pi));
  const double split[2] = {0.4, 0.45};
  CHECK(localEvaluationJacobian(split, assignGraphWithThreshold(split, 1.0, false)) <
        localEvaluationJacobian(pts, g));
}

TEST_CASE("scaling diagnostics stay bounded for clusters") {
  for (int d : {25, 100, 400}) {
    const KostlanKernel k(d, 8);
    const double h = 0.3 / std::sqrt(static_cast<double>(d));
    const ScalingDiagnostics s =
        scalingDiagnostics(k, Configuration{d, {0.4, 0.4 + h, 0.4 + 2.5 * h}}, RandomStream(3));
    CHECK(s.normalizedDensity > 0.0);
    CHECK(s.normalizedDensity < 1.0);
  }
}
