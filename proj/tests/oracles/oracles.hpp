#pragma once

// Independent reference computations used to freeze expected values.
// None of these call into the series, linbez or matrix code under test.

#include <algorithm>
#include <numeric>
#include <vector>

#include "cylcert/mpoly.hpp"

namespace oracle {

using cylcert::Poly;
using cylcert::Rational;

inline Poly trunc(const Poly& p, std::size_t x, int n) { return p.truncated(x, n); }

/// exp(x f) mod x^n as the plain Taylor sum of (x f)^k / k!.
inline Poly exp_taylor(const Poly& f, std::size_t x, int n) {
  Poly g = f * Poly::var(f.ctx(), x);
  Poly term = Poly::one(f.ctx()), sum = Poly::one(f.ctx());
  for (int k = 1; k < n; ++k) {
    term = trunc(term * g, x, n).scaled(Rational(1, k));
    sum += term;
  }
  return trunc(sum, x, n);
}

/// f with exp(x f) = p mod x^n, from log(1+u) = sum (-1)^(k+1) u^k / k.
inline Poly log_series(const Poly& p, std::size_t x, int n) {
  Poly u = p - Poly::one(p.ctx());
  Poly pw = Poly::one(p.ctx()), sum(p.ctx());
  for (int k = 1; k < n; ++k) {
    pw = trunc(pw * u, x, n);
    sum += pw.scaled(Rational(k % 2 == 1 ? 1 : -1, k));
  }
  return trunc(sum, x, n).exact_div_pow(x, 1);
}

/// binom(a, j) for rational a.
inline Rational binom(const Rational& a, int j) {
  Rational r(1);
  for (int i = 0; i < j; ++i) r = r * (a - Rational(i)) / Rational(i + 1);
  return r;
}

/// k-th root of P with constant term c0 (a unit monomial), via the binomial
/// series of (1 + u)^(1/k) where P = c0^k (1 + u).
inline Poly binomial_root(const Poly& P, unsigned k, const Poly& c0, std::size_t x, int n) {
  Poly c0k = c0.pow(k);
  Poly inv = *c0k.unit_inverse();
  Poly u = trunc((P - c0k) * inv, x, n);
  Poly pw = Poly::one(P.ctx()), sum = Poly::one(P.ctx());
  Rational a(1, static_cast<long>(k));
  for (int j = 1; j < n; ++j) {
    pw = trunc(pw * u, x, n);
    sum += pw.scaled(binom(a, j));
  }
  return trunc(c0 * sum, x, n);
}

/// Determinant over the rationals by Gaussian elimination.
inline Rational rational_det(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c].is_zero()) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) { std::swap(m[piv], m[c]); d = -d; }
    d *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return d;
}

/// Sylvester resultant of two dense univariate polynomials (coefficients
/// listed from degree 0 upward, leading coefficients nonzero).
inline Rational sylvester_resultant(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  const std::size_t m = a.size() - 1, n = b.size() - 1;
  const std::size_t sz = m + n;
  if (sz == 0) return Rational(1);
  std::vector<std::vector<Rational>> s(sz, std::vector<Rational>(sz, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) s[i][i + j] = a[m - j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n; ++j) s[n + i][i + j] = b[n - j];
  return rational_det(s);
}

/// Leibniz-formula determinant of a small polynomial matrix.
inline Poly perm_det(const std::vector<std::vector<Poly>>& m, const cylcert::CtxPtr& ctx) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Poly total(ctx);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Poly prod = Poly::one(ctx);
    for (std::size_t i = 0; i < n; ++i) prod = prod * m[i][perm[i]];
    if (inversions % 2 == 0) total += prod; else total -= prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Value of p at a rational point (entries for Laurent variables must be nonzero).
inline Rational eval_at(const Poly& p, const std::vector<Rational>& point) {
  Rational sum(0);
  for (const auto& [e, c] : p.terms()) {
    Rational t = c;
    for (std::size_t v = 0; v < point.size(); ++v) t *= point[v].pow(e[v]);
    sum += t;
  }
  return sum;
}

}  // namespace oracle
