#pragma once

#include <complex>
#include <vector>

#include "kaclab/random.hpp"

namespace kaclab {

enum class Field { Real, Complex };

// Random Kostlan polynomial p(t) = sum_k a_k sqrt(C(d,k)) t^k. The a_k are
// the coordinates in the orthonormal basis: standard normal for a real
// sample, standard complex normal (each part variance 1/2) for a complex one.
struct SectionSample {
  int degree = 0;
  Field field = Field::Real;
  std::vector<double> re;
  std::vector<double> im;  // empty for real samples

  std::complex<double> coefficient(int k) const {
    return {re[k], im.empty() ? 0.0 : im[k]};
  }
};

// sqrt(C(d, k)) for k = 0..d, computed once per degree in log domain.
const std::vector<double>& binomialWeights(int degree);

// Monomial coefficients c_k = a_k sqrt(C(d,k)) of the real part.
std::vector<double> monomialCoefficients(const SectionSample& s);
std::vector<std::complex<double>> monomialCoefficientsComplex(const SectionSample& s);

SectionSample sampleReal(int degree, RandomStream& rng);
SectionSample sampleComplex(int degree, RandomStream& rng);
SectionSample fromCoefficients(std::vector<double> a);

// p(t) and p'(t) for a real sample. |t| > 1 goes through the reversed
// polynomial at 1/t.
double evaluate(const SectionSample& s, double t);
double evaluateDeriv(const SectionSample& s, double t);

// p(t) / sqrt(K(t,t)) = p(t) / (1 + t^2)^(d/2) at the point with arc-length
// coordinate u; unit variance everywhere and the same sign as p.
double evaluateNormalized(const SectionSample& s, double u);

// The homogeneous form f(theta) = sum_k c_k cos^(d-k) sin^k at angle theta.
// Smooth on the whole circle with f(theta + pi) = (-1)^d f(theta); its zeros
// in [0, pi) are the real zeros of p on RP^1.
double evaluateHomogeneous(const std::vector<double>& c, double theta);

}  // namespace kaclab
