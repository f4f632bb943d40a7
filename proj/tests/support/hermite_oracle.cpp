#include "hermite_oracle.hpp"

#include <stdexcept>
#include <utility>

namespace oracle {

namespace {

// d^j/dx^j x^i = i!/(i-j)! x^(i-j).
mpq_class monomialDerivative(int i, int j, const mpq_class& x) {
  if (j > i) return 0;
  mpq_class r = 1;
  for (int m = 0; m < j; ++m) r *= i - m;
  for (int m = 0; m < i - j; ++m) r *= x;
  return r;
}

}  // namespace

mpq_class derivativeAt(const std::vector<mpq_class>& poly, int j, const mpq_class& x) {
  mpq_class r = 0;
  for (int i = 0; i < static_cast<int>(poly.size()); ++i) r += poly[i] * monomialDerivative(i, j, x);
  return r;
}

mpq_class hermiteLeading(const std::vector<mpq_class>& poly, const std::vector<Node>& nodes) {
  int n = 0;
  for (const auto& nd : nodes) n += nd.multiplicity;
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n + 1));
  int row = 0;
  for (const auto& nd : nodes) {
    for (int j = 0; j < nd.multiplicity; ++j, ++row) {
      for (int i = 0; i < n; ++i) a[row][i] = monomialDerivative(i, j, nd.x);
      a[row][n] = derivativeAt(poly, j, nd.x);
    }
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw std::runtime_error("singular confluent Vandermonde system");
    std::swap(a[p], a[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const mpq_class f = a[r][c] / a[c][c];
      for (int k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return a[n - 1][n] / a[n - 1][n - 1];
}

}  // namespace oracle
