#pragma once

// Exact integer-coefficient polynomials and Sturm sequences (GMP).
// Internal to the library.

#include <gmpxx.h>

#include <utility>
#include <vector>

namespace kaclab::detail {

using ZPoly = std::vector<mpz_class>;  // c[0] + c[1] t + ..., trimmed

// Exact image of binary floating-point coefficients, scaled by a common
// power of two so every coefficient is an integer.
ZPoly fromDoubles(const std::vector<double>& c);

int degree(const ZPoly& p);
ZPoly derivative(const ZPoly& p);
ZPoly primitivePart(ZPoly p);
ZPoly gcd(ZPoly a, ZPoly b);
ZPoly exactQuotient(const ZPoly& a, const ZPoly& b);  // b divides a
int signAt(const ZPoly& p, const mpq_class& x);

class SturmChain {
 public:
  explicit SturmChain(const ZPoly& p);

  // Sign changes at a finite rational point or at +-infinity (sign = +-1).
  int variations(const mpq_class& x) const;
  int variationsAtInfinity(int sign) const;
  // Distinct roots in (a, b].
  int count(const mpq_class& a, const mpq_class& b) const { return variations(a) - variations(b); }
  int countAll() const { return variationsAtInfinity(-1) - variationsAtInfinity(1); }
  const ZPoly& head() const { return chain_.front(); }

 private:
  std::vector<ZPoly> chain_;
};

struct RationalInterval {
  mpq_class lo, hi;  // root in (lo, hi], or lo == hi for an exact rational root
};

// Disjoint isolating intervals for the real roots of a square-free p,
// sorted left to right.
std::vector<RationalInterval> isolate(const ZPoly& squareFree);

// Shrinks an isolating interval of a square-free p by exact bisection until
// hi - lo <= width.
void refine(const ZPoly& squareFree, RationalInterval& iv, const mpq_class& width);

}  // namespace kaclab::detail
