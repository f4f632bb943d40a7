#pragma once

#include <gmpxx.h>

#include <vector>

// Exact reference for confluent divided differences: the leading coefficient
// of the Hermite interpolant, found by solving the confluent Vandermonde
// system in rational arithmetic.
namespace oracle {

struct Node {
  mpq_class x;
  int multiplicity = 1;
};

// poly[i] is the coefficient of x^i.
mpq_class hermiteLeading(const std::vector<mpq_class>& poly, const std::vector<Node>& nodes);

// j-th derivative of poly at x.
mpq_class derivativeAt(const std::vector<mpq_class>& poly, int j, const mpq_class& x);

}  // namespace oracle
