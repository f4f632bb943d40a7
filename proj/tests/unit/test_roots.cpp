#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "kaclab/error.hpp"
#include "kaclab/kernels.hpp"
#include "kaclab/roots.hpp"

using namespace kaclab;

namespace {

const CountMethod kMethods[] = {CountMethod::Auto, CountMethod::Certified, CountMethod::ExactSturm};

}  // namespace

TEST_CASE("counts on small known polynomials") {
  // (t - 1)(t - 2)(t + 3) = t^3 - 7t + 6
  const std::vector<double> cubic{6.0, -7.0, 0.0, 1.0};
  for (auto m : kMethods) {
    CHECK(countRealRootsMonomial(cubic, m).total == 3);
    CHECK(countRealRootsMonomial({1.0, 0.0, 1.0}, m).total == 0);
  }
  // Double root at 1 counts once.
  CHECK(countRealRootsMonomial({1.0, -2.0, 1.0}, CountMethod::ExactSturm).total == 1);
  CHECK(countRealRootsMonomial({1.0, -2.0, 1.0}).total == 1);

  const RootCount inf = countRealRootsMonomial({1.0, -1.0, 0.0});
  CHECK(inf.rootAtInfinity);
  CHECK(inf.total == 1);
  CHECK_THROWS_AS(countRealRootsMonomial({0.0, 0.0, 0.0}), ZeroPolynomial);
}

TEST_CASE("certified counter agrees with exact Sturm on random samples") {
  for (int d : {3, 10, 50}) {
    for (int i = 0; i < 30; ++i) {
      RandomStream rng = RandomStream::forSample(100 + d, i);
      const SectionSample s = sampleReal(d, rng);
      const int exact = countRealRootsRP1(s, CountMethod::ExactSturm).total;
      CHECK(countRealRootsRP1(s, CountMethod::Certified).total == exact);
      CHECK(static_cast<int>(isolateRealRoots(s).real.size()) == exact);
    }
  }
}

TEST_CASE("interval counts partition the circle") {
  RandomStream rng(4);
  const SectionSample s = sampleReal(25, rng);
  const int total = countRealRootsRP1(s).total;
  const std::vector<double> cuts{0.0, 0.3, 0.31, 0.9, 1.7};
  const RootCount parts = countRealRootsPartition(s, cuts);
  int sum = 0;
  for (int n : parts.perInterval) sum += n;
  CHECK(parts.perInterval.size() == cuts.size());
  CHECK(sum == total);
  CHECK(parts.total == total);
  CHECK(countRealRootsInterval(s, 0.2, 0.2 + FSGeometry::totalLength()) == total);
  // A wrapping arc.
  CHECK(countRealRootsInterval(s, 1.7, 0.3) == parts.perInterval[4] + parts.perInterval[0]);
}

TEST_CASE("endpoint roots are nudged") {
  // Root at t = 0, i.e. u = 0.
  const SectionSample s = fromCoefficients({0.0, 1.0, 0.5});
  int nudges = 0;
  const int n = countRealRootsInterval(s, 0.0, 0.5, &nudges);
  CHECK(nudges >= 1);
  CHECK(n >= 0);
}

TEST_CASE("isolated roots are accurate") {
  const std::vector<double> cubic{6.0, -7.0, 0.0, 1.0};
  for (const RootList& r : {isolateRealRootsMonomial(cubic), isolateRealRootsExact(cubic)}) {
    REQUIRE(r.real.size() == 3);
    CHECK(r.real[0] == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(r.real[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.real[2] == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("complex roots of t^d - 1") {
  const int d = 12;
  std::vector<std::complex<double>> c(d + 1, 0.0);
  c[0] = -1.0;
  c[d] = 1.0;
  const RootList r = complexRootsMonomial(c, true);
  REQUIRE(r.complex.size() == static_cast<std::size_t>(d));
  for (const auto& z : r.complex) {
    CHECK(std::abs(std::abs(z) - 1.0) < 1e-10);
    CHECK(relativeResidual(c, z) < 1e-8);
  }
  CHECK(r.conjugateClosed);
}

TEST_CASE("complex roots of Kostlan samples") {
  for (int i = 0; i < 20; ++i) {
    RandomStream rng = RandomStream::forSample(77, i);
    const SectionSample s = sampleComplex(60, rng);
    const RootList r = complexRoots(s);
    CHECK(static_cast<int>(r.complex.size()) + r.atInfinity == 60);
    const auto c = monomialCoefficientsComplex(s);
    for (const auto& z : r.complex) CHECK(relativeResidual(c, z) <= 1e-8);
  }
  // High degree: monomial coefficients span ~29 decades, none are at infinity.
  RandomStream big = RandomStream::forSample(79, 0);
  const SectionSample s200 = sampleComplex(200, big);
  const RootList r200 = complexRoots(s200);
  CHECK(r200.atInfinity == 0);
  CHECK(r200.complex.size() == 200);
  const auto c200 = monomialCoefficientsComplex(s200);
  for (const auto& z : r200.complex) CHECK(relativeResidual(c200, z) <= 1e-8);
  // Real input: the real-root count from the complex solver matches Sturm.
  for (int i = 0; i < 10; ++i) {
    RandomStream rng = RandomStream::forSample(78, i);
    const SectionSample s = sampleReal(40, rng);
    const RootList r = complexRoots(s);
    int real = 0;
    for (const auto& z : r.complex) real += z.imag() == 0.0;
    CHECK(real == countRealRootsRP1(s, CountMethod::ExactSturm).total);
    CHECK(r.conjugateClosed);
  }
}

TEST_CASE("stereographic projection") {
  const auto n = sphereNorthPole();
  CHECK(n[2] == doctest::Approx(1.0));
  for (std::complex<double> z : {std::complex<double>(0, 0), {3, -4}, {0.1, 0.2}}) {
    const auto p = toSphere(z);
    CHECK(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] == doctest::Approx(1.0));
  }
  CHECK(toSphere({1e300, 0})[2] == doctest::Approx(1.0));
  CHECK(toSphere({0, 0})[2] == doctest::Approx(-1.0));
}

TEST_CASE("mean real root count") {
  const int n = 4000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    RandomStream rng = RandomStream::forSample(3, i);
    const double c = countRealRootsRP1(sampleReal(16, rng)).total;
    s1 += c;
    s2 += c * c;
  }
  const double mean = s1 / n, se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 4.0) < 4.0 * se);
}
