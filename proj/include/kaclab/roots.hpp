#pragma once

#include <array>
#include <complex>
#include <vector>

#include "kaclab/ensemble.hpp"

namespace kaclab {

enum class CountMethod {
  Auto,        // certified floating-point counter, exact Sturm when it cannot certify
  Certified,   // certified counter only; throws NoConvergence if it cannot certify
  ExactSturm,  // exact rational Sturm sequence
};

struct RootCount {
  int total = 0;
  std::vector<int> perInterval;  // filled by countRealRootsPartition
  bool usedExact = false;        // answer came from the rational Sturm sequence
  bool rootAtInfinity = false;   // leading coefficient exactly zero (not counted)
};

struct RootList {
  std::vector<double> real;         // affine coordinates, strictly increasing
  std::vector<bool> multiple;       // per real root
  std::vector<std::complex<double>> complex;
  int atInfinity = 0;               // roots at t = infinity (complex case)
  int sweeps = 0;                   // simultaneous-iteration sweeps used
  bool usedFallback = false;        // companion-matrix eigenvalues were needed
  bool conjugateClosed = true;      // real input only
};

// Number of distinct real zeros of p on RP^1 (the point at infinity is
// excluded; it is a zero only if the leading coefficient vanishes exactly).
RootCount countRealRootsRP1(const SectionSample& s, CountMethod method = CountMethod::Auto);
RootCount countRealRootsMonomial(const std::vector<double>& c,
                                 CountMethod method = CountMethod::Auto);

// Zeros with arc-length coordinate in the half-open arc (u0, u1], walking
// forward from u0 (the arc may wrap). u1 - u0 >= sqrt(pi) means the whole
// circle. Endpoints that are exact zeros are nudged by one ulp;
// `perturbations` (if given) receives the number of nudges.
int countRealRootsInterval(const SectionSample& s, double u0, double u1,
                           int* perturbations = nullptr);

// Counts on the arcs between consecutive breakpoints (sorted arc-length
// values, wrapping around once).
RootCount countRealRootsPartition(const SectionSample& s, const std::vector<double>& breakpoints);

// Isolated and refined real roots (affine coordinate); width <= tol * max(1, |t|).
RootList isolateRealRoots(const SectionSample& s, double tol = 1e-12);
RootList isolateRealRootsMonomial(const std::vector<double>& c, double tol = 1e-12);

// Same pipeline but isolating with the exact Sturm sequence.
RootList isolateRealRootsExact(const std::vector<double>& c, double tol = 1e-12);

// All d roots on CP^1 (a real sample is complexified).
RootList complexRoots(const SectionSample& s);
RootList complexRootsMonomial(const std::vector<std::complex<double>>& c, bool realInput = false);

// |p(z)| / sum_k |c_k| |z|^k, evaluated in the chart where it is stable.
double relativeResidual(const std::vector<std::complex<double>>& c, std::complex<double> z);

// Inverse stereographic projection onto the unit sphere; infinity -> north pole.
std::array<double, 3> toSphere(std::complex<double> z);
std::array<double, 3> sphereNorthPole();

}  // namespace kaclab
