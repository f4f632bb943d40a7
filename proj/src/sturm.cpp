#include "sturm.hpp"

#include <cmath>
#include <stdexcept>

namespace kaclab::detail {

namespace {

void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Sign changes of a sequence, zeros skipped.
int countChanges(const std::vector<int>& signs) {
  int changes = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Remainder of a by b up to a positive constant factor, so that the Sturm
// recurrence keeps the correct signs.
ZPoly signedPseudoRemainder(ZPoly r, const ZPoly& b) {
  const int db = degree(b);
  const mpz_class& lb = b.back();
  int steps = 0;
  while (degree(r) >= db && !r.empty()) {
    const int shift = degree(r) - db;
    const mpz_class lr = r.back();
    for (auto& x : r) x *= lb;
    for (int i = 0; i <= db; ++i) r[i + shift] -= lr * b[i];
    trim(r);
    ++steps;
  }
  if (sgn(lb) < 0 && steps % 2 == 1) {
    for (auto& x : r) x = -x;
  }
  return r;
}

}  // namespace

ZPoly fromDoubles(const std::vector<double>& c) {
  // c_k = m_k 2^(e_k) with integer m_k; shift all exponents by the minimum.
  std::vector<std::pair<mpz_class, long>> parts;
  long minExp = 0;
  bool any = false;
  for (double x : c) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite coefficient");
    if (x == 0.0) {
      parts.emplace_back(0, 0);
      continue;
    }
    int e = 0;
    const double m = std::frexp(x, &e);
    const double mi = std::ldexp(m, 53);  // exact integer
    parts.emplace_back(mpz_class(mi), static_cast<long>(e) - 53);
    if (!any || parts.back().second < minExp) minExp = parts.back().second;
    any = true;
  }
  ZPoly p;
  p.reserve(c.size());
  for (auto& [m, e] : parts) {
    mpz_class v = m;
    if (m != 0) mpz_mul_2exp(v.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(e - minExp));
    p.push_back(v);
  }
  trim(p);
  return p;
}

int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

ZPoly derivative(const ZPoly& p) {
  ZPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<unsigned long>(k));
  trim(d);
  return d;
}

ZPoly primitivePart(ZPoly p) {
  trim(p);
  if (p.empty()) return p;
  mpz_class g = 0;
  for (const auto& x : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  if (g > 1) {
    for (auto& x : p) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
  return p;
}

ZPoly gcd(ZPoly a, ZPoly b) {
  a = primitivePart(std::move(a));
  b = primitivePart(std::move(b));
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!b.empty()) {
    ZPoly r = primitivePart(signedPseudoRemainder(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && sgn(a.back()) < 0) {
    for (auto& x : a) x = -x;
  }
  return a;
}

ZPoly exactQuotient(const ZPoly& a, const ZPoly& b) {
  const int da = degree(a);
  const int db = degree(b);
  if (db < 0) throw std::invalid_argument("division by zero polynomial");
  if (da < db) return {};
  // Over Q the quotient of primitive polynomials may carry a rational
  // factor; clear it by scaling a with lc(b)^(da-db+1) and take the
  // primitive part, which only changes the result by a positive constant.
  ZPoly r = a;
  ZPoly q(da - db + 1);
  mpz_class lb = b.back();
  mpz_class scale = 1;
  for (int i = 0; i <= da - db; ++i) scale *= lb;
  if (sgn(scale) < 0) scale = -scale;
  for (auto& x : r) x *= scale;
  for (int k = da - db; k >= 0; --k) {
    const mpz_class& top = r[k + db];
    mpz_class coef;
    mpz_divexact(coef.get_mpz_t(), top.get_mpz_t(), lb.get_mpz_t());
    q[k] = coef;
    for (int i = 0; i <= db; ++i) r[k + i] -= coef * b[i];
  }
  return primitivePart(std::move(q));
}

int signAt(const ZPoly& p, const mpq_class& x) {
  if (p.empty()) return 0;
  // den^n p(num/den) by homogeneous Horner.
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  mpz_class acc = p.back();
  mpz_class denPow = 1;
  for (int k = degree(p) - 1; k >= 0; --k) {
    denPow *= den;
    acc = acc * num + p[k] * denPow;
  }
  return sgn(acc);
}

SturmChain::SturmChain(const ZPoly& p) {
  ZPoly a = primitivePart(p);
  if (a.empty()) throw std::invalid_argument("zero polynomial has no Sturm chain");
  chain_.push_back(a);
  ZPoly b = primitivePart(derivative(a));
  while (!b.empty()) {
    chain_.push_back(b);
    ZPoly r = signedPseudoRemainder(chain_[chain_.size() - 2], b);
    for (auto& x : r) x = -x;
    b = primitivePart(std::move(r));
  }
}

int SturmChain::variations(const mpq_class& x) const {
  std::vector<int> signs;
  signs.reserve(chain_.size());
  for (const auto& q : chain_) signs.push_back(signAt(q, x));
  return countChanges(signs);
}

int SturmChain::variationsAtInfinity(int sign) const {
  std::vector<int> signs;
  signs.reserve(chain_.size());
  for (const auto& q : chain_) {
    int s = sgn(q.back());
    if (sign < 0 && degree(q) % 2 == 1) s = -s;
    signs.push_back(s);
  }
  return countChanges(signs);
}

namespace {

// Cauchy bound as a power of two: every root has |t| < 2^k.
mpq_class rootBound(const ZPoly& p) {
  mpz_class lead = abs(p.back());
  mpz_class big = 0;
  for (int k = 0; k < degree(p); ++k) big = std::max(big, mpz_class(abs(p[k])));
  mpq_class ratio(big, lead);
  ratio.canonicalize();
  mpq_class bound = 1;
  while (bound <= ratio + 1) bound *= 2;
  return bound;
}

void isolateRec(const ZPoly& p, const SturmChain& chain, const mpq_class& lo, const mpq_class& hi,
                int count, std::vector<RationalInterval>& out) {
  if (count == 0) return;
  if (count == 1) {
    out.push_back({lo, hi});
    return;
  }
  mpq_class mid = (lo + hi) / 2;
  const int left = chain.count(lo, mid);
  isolateRec(p, chain, lo, mid, left, out);
  isolateRec(p, chain, mid, hi, count - left, out);
}

}  // namespace

std::vector<RationalInterval> isolate(const ZPoly& squareFree) {
  std::vector<RationalInterval> out;
  if (degree(squareFree) < 1) return out;
  SturmChain chain(squareFree);
  const mpq_class bound = rootBound(squareFree);
  isolateRec(squareFree, chain, -bound, bound, chain.count(-bound, bound), out);
  // A root sitting exactly on a bisection point is the right end of its
  // interval; collapse such intervals to the exact point.
  for (auto& iv : out) {
    if (signAt(squareFree, iv.hi) == 0) iv.lo = iv.hi;
  }
  return out;
}

void refine(const ZPoly& p, RationalInterval& iv, const mpq_class& width) {
  if (iv.lo == iv.hi) return;
  const int sHi = signAt(p, iv.hi);
  if (sHi == 0) {
    iv.lo = iv.hi;
    return;
  }
  while (iv.hi - iv.lo > width) {
    mpq_class mid = (iv.lo + iv.hi) / 2;
    const int sMid = signAt(p, mid);
    if (sMid == 0) {
      iv.lo = iv.hi = mid;
      return;
    }
    if (sMid == sHi) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
    }
  }
}

}  // namespace kaclab::detail
