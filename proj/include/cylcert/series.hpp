#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/errors.hpp"
#include "cylcert/mpoly.hpp"

namespace cylcert {

/// Power series in one distinguished variable, truncated at a fixed order.
/// The other variables of the context (possibly Laurent) form the
/// coefficient ring.
template <class C>
class TruncSeries {
 public:
  TruncSeries(MPoly<C> body, std::size_t var, int order)
      : body_(body.truncated(var, order)), var_(var), order_(order) {
    if (order < 0) throw Error("negative truncation order");
    if (body_.ctx() && body_.ctx()->laurent(var))
      throw ContextError("series variable must not be Laurent");
    if (body_.min_degree(var) < 0) throw Error("series body has negative powers of the series variable");
  }

  const MPoly<C>& body() const { return body_; }
  std::size_t var() const { return var_; }
  int order() const { return order_; }
  const CtxPtr& ctx() const { return body_.ctx(); }

  /// Coefficients c_0..c_{order-1}, each free of the series variable.
  std::vector<MPoly<C>> coeffs() const {
    std::vector<MPoly<C>> out;
    for (int k = 0; k < order_; ++k) out.push_back(body_.coeff_in(var_, k));
    return out;
  }
  static TruncSeries from_coeffs(const CtxPtr& ctx, std::size_t var, const std::vector<MPoly<C>>& cs) {
    return TruncSeries(MPoly<C>::from_coeffs(ctx, var, cs), var, static_cast<int>(cs.size()));
  }

  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    int n = std::min(a.order_, b.order_);
    return TruncSeries((a.body_.truncated(a.var_, n) * b.body_.truncated(a.var_, n)).truncated(a.var_, n),
                       a.var_, n);
  }
  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    return TruncSeries(a.body_ + b.body_, a.var_, std::min(a.order_, b.order_));
  }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    return TruncSeries(a.body_ - b.body_, a.var_, std::min(a.order_, b.order_));
  }

  TruncSeries with_order(int n) const { return TruncSeries(body_, var_, n); }

  TruncSeries pow(unsigned k) const {
    TruncSeries r(MPoly<C>::one(ctx()), var_, order_);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Equality of the truncated bodies at the smaller order.
  bool congruent(const TruncSeries& o) const {
    int n = std::min(order_, o.order_);
    return body_.truncated(var_, n) == o.body_.truncated(var_, n);
  }

 private:
  MPoly<C> body_;
  std::size_t var_;
  int order_;
};

/// Multiplicative inverse modulo var^order; the constant term must be a unit.
template <class C>
TruncSeries<C> inv_series(const TruncSeries<C>& p) {
  auto a = p.coeffs();
  const int n = p.order();
  if (n == 0) return p;
  auto inv0 = a[0].unit_inverse();
  if (!inv0) throw NotUnitError("series constant term is not a unit");
  std::vector<MPoly<C>> b(static_cast<std::size_t>(n), MPoly<C>(p.ctx()));
  b[0] = *inv0;
  for (int k = 1; k < n; ++k) {
    MPoly<C> acc(p.ctx());
    for (int j = 1; j <= k; ++j) acc += a[j] * b[k - j];
    b[k] = -(acc * *inv0);
  }
  return TruncSeries<C>::from_coeffs(p.ctx(), p.var(), b);
}

/// exp(var * f) modulo var^n, from the recurrence k E_k = sum_j j g_j E_{k-j}
/// with g = var * f. The body of f is used exactly.
template <class C>
TruncSeries<C> exp_xmul(const MPoly<C>& f, std::size_t var, int n) {
  const CtxPtr& ctx = f.ctx();
  std::vector<MPoly<C>> g(static_cast<std::size_t>(std::max(n, 1)), MPoly<C>(ctx));
  for (int k = 1; k < n; ++k) g[k] = f.coeff_in(var, k - 1);
  std::vector<MPoly<C>> e(static_cast<std::size_t>(std::max(n, 0)), MPoly<C>(ctx));
  if (n > 0) e[0] = MPoly<C>::one(ctx);
  for (int k = 1; k < n; ++k) {
    MPoly<C> acc(ctx);
    for (int j = 1; j <= k; ++j) {
      if (g[j].is_zero()) continue;
      acc += (g[j] * e[k - j]).scaled(C(Rational(j)));
    }
    e[k] = acc.scaled(C(Rational(1, k)));
  }
  return TruncSeries<C>::from_coeffs(ctx, var, e);
}

template <class C>
TruncSeries<C> exp_xmul(const TruncSeries<C>& f, int n) {
  return exp_xmul(f.body(), f.var(), n);
}

/// Returns f (of order n-1) with exp(var * f) == p modulo var^n. Requires p(0) = 1.
template <class C>
TruncSeries<C> log_unit(const TruncSeries<C>& p, int n) {
  if (p.order() < n) throw Error("log_unit: series known only to order " + std::to_string(p.order()));
  auto a = p.with_order(n).coeffs();
  if (n == 0) return TruncSeries<C>(MPoly<C>(p.ctx()), p.var(), 0);
  if (a[0] != MPoly<C>::one(p.ctx())) throw Error("log_unit: constant term must be 1");
  std::vector<MPoly<C>> L(static_cast<std::size_t>(n), MPoly<C>(p.ctx()));
  for (int k = 1; k < n; ++k) {
    MPoly<C> acc(p.ctx());
    for (int j = 1; j < k; ++j) acc += (L[j] * a[k - j]).scaled(C(Rational(j)));
    L[k] = a[k] - acc.scaled(C(Rational(1, k)));
  }
  std::vector<MPoly<C>> f(L.begin() + 1, L.end());
  return TruncSeries<C>::from_coeffs(p.ctx(), p.var(), f);
}

/// k-th root with prescribed constant term c0 (c0^k must equal p(0) and c0
/// must be a unit), by Newton iteration y <- y - (y^k - p) / (k y^(k-1)).
template <class C>
TruncSeries<C> kth_root(const TruncSeries<C>& p, unsigned k, const MPoly<C>& c0) {
  if (k == 0) throw Error("kth_root: k must be positive");
  const int n = p.order();
  const CtxPtr& ctx = p.ctx();
  MPoly<C> c0e = MPoly<C>(ctx) + c0;
  if (c0e.involves(p.var())) throw Error("kth_root: branch constant involves the series variable");
  if (!c0e.unit_inverse()) throw NotUnitError("kth_root: branch constant is not a unit");
  if (c0e.pow(k) != p.body().coeff_in(p.var(), 0))
    throw Error("kth_root: branch constant to the k-th power differs from the constant term");
  if (n <= 1) return TruncSeries<C>(c0e, p.var(), n);
  TruncSeries<C> y(c0e, p.var(), 1);
  int prec = 1;
  const C inv_k = C(Rational(1, static_cast<long>(k)));
  while (prec < n) {
    prec = std::min(2 * prec, n);
    y = y.with_order(prec);
    TruncSeries<C> target = p.with_order(prec);
    TruncSeries<C> ykm1 = y.pow(k - 1);
    TruncSeries<C> resid = ykm1 * y - target;
    TruncSeries<C> step = resid * inv_series(ykm1);
    y = y - TruncSeries<C>(step.body().scaled(inv_k), p.var(), prec);
  }
  if (!y.pow(k).congruent(p)) throw VerificationError("kth_root: Newton result fails the power check");
  return y;
}

}  // namespace cylcert
