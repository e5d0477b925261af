#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "cylcert/errors.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/series.hpp"

namespace cylcert {

template <class C>
struct DivResult {
  MPoly<C> quotient;
  MPoly<C> remainder;
};

/// Truncation modulo var^order, used by the "mod x^n" variants.
struct TruncSpec {
  std::size_t var;
  int order;
};

/// Division by F, monic in `v` up to a unit: G = q F + rem with deg_v rem < deg_v F.
/// With `mod` set, the identity holds modulo mod.var^mod.order and the leading
/// coefficient of F only needs to be a unit there.
template <class C>
DivResult<C> divide_by_monic(const MPoly<C>& G, const MPoly<C>& F, std::size_t v,
                             std::optional<TruncSpec> mod = std::nullopt) {
  require_same_ctx(G.ctx(), F.ctx(), "divide_by_monic");
  const CtxPtr& ctx = F.ctx();
  if (ctx->laurent(v)) throw ContextError("divide_by_monic: variable '" + ctx->name(v) + "' is Laurent");
  const int d = F.degree(v);
  if (d < 0) throw DivisionError("divide_by_monic: division by zero");
  auto cut = [&](const MPoly<C>& p) { return mod ? p.truncated(mod->var, mod->order) : p; };
  MPoly<C> lc = F.coeff_in(v, d);
  MPoly<C> lc_inv(ctx);
  if (auto u = lc.unit_inverse()) {
    lc_inv = *u;
  } else if (mod) {
    if (mod->var == v) throw ContextError("divide_by_monic: truncation variable equals division variable");
    lc_inv = inv_series(TruncSeries<C>(lc, mod->var, mod->order)).body();
  } else {
    throw NotUnitError("divide_by_monic: leading coefficient in '" + ctx->name(v) + "' is not a unit");
  }
  MPoly<C> rem = cut(G);
  MPoly<C> q(ctx);
  while (true) {
    const int k = rem.degree(v);
    if (k < d) break;
    MPoly<C> t = cut(rem.coeff_in(v, k) * lc_inv) * MPoly<C>::var(ctx, v, k - d);
    q += t;
    rem = cut(rem - t * F);
    if (rem.degree(v) >= k) throw VerificationError("divide_by_monic: leading term did not cancel");
  }
  if (!cut(G - q * F - rem).is_zero()) throw VerificationError("divide_by_monic: identity check failed");
  return {q, rem};
}

namespace detail {

template <class C>
const std::pair<const Exponents, C>& leading_term(const MPoly<C>& p) {
  return *p.terms().rbegin();
}

inline bool divides(const Exponents& m, const Exponents& e) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (e[i] < m[i]) return false;
  return true;
}

/// Monomial that clears the negative exponents of Laurent variables and
/// removes any common Laurent-monomial factor.
template <class C>
Exponents laurent_normalizer(const MPoly<C>& p) {
  Exponents s = zero_exponents();
  const VarCtx& ctx = *p.ctx();
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (ctx.laurent(i)) s[i] = -p.min_degree(i);
  return s;
}

inline Exponents negate(Exponents e) {
  for (auto& k : e) k = -k;
  return e;
}

}  // namespace detail

/// Lex division of f by a single polynomial g. Laurent variables are
/// handled by first clearing their denominators on both sides, so the
/// remainder is zero exactly when g divides f in the Laurent ring.
template <class C>
DivResult<C> reduce_by(const MPoly<C>& f, const MPoly<C>& g) {
  require_same_ctx(f.ctx(), g.ctx(), "reduce_by");
  if (g.is_zero()) throw DivisionError("reduce_by: division by zero");
  const CtxPtr& ctx = g.ctx();
  Exponents sg = detail::laurent_normalizer(g);
  Exponents sf = detail::laurent_normalizer(f);
  MPoly<C> gp = g.shifted(sg);
  MPoly<C> p = f.shifted(sf);
  const auto& [lm, lc] = detail::leading_term(gp);
  auto lc_inv = coef_inverse(lc);
  if (!lc_inv) throw NotUnitError("reduce_by: leading coefficient is not invertible");
  MPoly<C> q(ctx), r(ctx);
  while (!p.is_zero()) {
    auto [e, c] = detail::leading_term(p);
    if (detail::divides(lm, e)) {
      Exponents qe = e;
      for (std::size_t i = 0; i < qe.size(); ++i) qe[i] -= lm[i];
      MPoly<C> t = MPoly<C>::monomial(ctx, qe, c * *lc_inv);
      q += t;
      p -= t * gp;
    } else {
      r.add_term(e, c);
      p.add_term(e, -c);
    }
  }
  // f = s_f^{-1} (q g' + r) with g' = s_g g.
  Exponents qs = detail::negate(sf);
  for (std::size_t i = 0; i < qs.size(); ++i) qs[i] += sg[i];
  return {q.shifted(qs), r.shifted(detail::negate(sf))};
}

/// Exact quotient f / g, or nullopt when g does not divide f.
template <class C>
std::optional<MPoly<C>> divide_exact(const MPoly<C>& f, const MPoly<C>& g) {
  auto res = reduce_by(f, g);
  if (!res.remainder.is_zero()) return std::nullopt;
  return res.quotient;
}

template <class C>
MPoly<C> divide_exact_or_throw(const MPoly<C>& f, const MPoly<C>& g, const std::string& what) {
  auto q = divide_exact(f, g);
  if (!q) throw DivisionError(what + ": division is not exact");
  return *q;
}

}  // namespace cylcert
