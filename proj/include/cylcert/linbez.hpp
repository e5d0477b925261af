#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/division.hpp"
#include "cylcert/errors.hpp"
#include "cylcert/matrix.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/series.hpp"

namespace cylcert {

/// sum cofactors[i] * inputs[i] == value.
template <class C>
struct BezoutCert {
  std::vector<MPoly<C>> inputs;
  std::vector<MPoly<C>> cofactors;
  MPoly<C> value;

  bool verify() const {
    if (inputs.size() != cofactors.size()) return false;
    MPoly<C> sum(value.ctx());
    for (std::size_t i = 0; i < inputs.size(); ++i) sum += cofactors[i] * inputs[i];
    return sum == value;
  }
};

template <class C>
struct ExtGcd {
  MPoly<C> g, s, t;
};

namespace detail {

template <class C>
void require_univariate(const MPoly<C>& p, std::size_t x, const char* what) {
  for (const auto& [e, c] : p.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != x && e[i] != 0)
        throw ContextError(std::string(what) + ": polynomial involves '" + p.ctx()->name(i) +
                           "' besides '" + p.ctx()->name(x) + "'");
}

}  // namespace detail

/// Extended Euclid for polynomials in the single variable x over the
/// rationals: s a + t b = g with g monic.
inline ExtGcd<Rational> ext_gcd(const Poly& a, const Poly& b, std::size_t x) {
  require_same_ctx(a.ctx(), b.ctx(), "ext_gcd");
  detail::require_univariate(a, x, "ext_gcd");
  detail::require_univariate(b, x, "ext_gcd");
  if (a.is_zero() && b.is_zero()) throw DivisionError("ext_gcd: both inputs are zero");
  const CtxPtr& ctx = a.ctx();
  Poly r0 = a, r1 = b, s0 = Poly::one(ctx), s1(ctx), t0(ctx), t1 = Poly::one(ctx);
  while (!r1.is_zero()) {
    auto [q, rem] = divide_by_monic(r0, r1, x);
    Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  Rational lc_inv = r0.coeff_in(x, r0.degree(x)).constant_term().inverse();
  ExtGcd<Rational> out{r0.scaled(lc_inv), s0.scaled(lc_inv), t0.scaled(lc_inv)};
  if (out.s * a + out.t * b != out.g) throw VerificationError("ext_gcd: Bezout identity failed");
  return out;
}

inline bool coprime(const Poly& a, const Poly& b, std::size_t x) {
  return ext_gcd(a, b, x).g == Poly::one(a.ctx());
}

/// s x^k + t a = 1 when a(0) is a unit of the coefficient ring (which may
/// contain Laurent parameters): t is the inverse of a modulo x^k and s is
/// the exact quotient (1 - t a) / x^k.
template <class C>
BezoutCert<C> bezout_with_xpow(const MPoly<C>& a, std::size_t x, int k) {
  const CtxPtr& ctx = a.ctx();
  MPoly<C> t = inv_series(TruncSeries<C>(a, x, k)).body();
  MPoly<C> s = (MPoly<C>::one(ctx) - t * a).exact_div_pow(x, k);
  BezoutCert<C> cert{{MPoly<C>::var(ctx, x, k), a}, {s, t}, MPoly<C>::one(ctx)};
  if (!cert.verify()) throw VerificationError("bezout_with_xpow: identity failed");
  return cert;
}

/// Third row (h1, h2, h3) completing rows (g1, 0, x^n), (0, g2, x^n) to a
/// matrix of determinant 1.
struct UnimodularCompletion {
  PolyMatrix<Rational> matrix;
  Poly h1, h2, h3;
};

inline UnimodularCompletion complete_unimodular(const Poly& g1, const Poly& g2, std::size_t x, int n) {
  const CtxPtr& ctx = g1.ctx();
  if (g1.coeff_in(x, 0) != Poly::one(ctx) || g2.coeff_in(x, 0) != Poly::one(ctx))
    throw Error("complete_unimodular: g1(0) and g2(0) must equal 1");
  auto st = ext_gcd(g1, g2, x);
  if (st.g != Poly::one(ctx))
    throw Error("complete_unimodular: gcd(g1, g2) has degree " + std::to_string(st.g.degree(x)) +
                "; adjust g2 with coprime_adjust");
  Poly xn = Poly::var(ctx, x, n);
  auto uv = ext_gcd(g1 * g2, xn, x);
  Poly h3 = uv.s;
  Poly h2 = -(uv.t * st.s);
  Poly h1 = -(uv.t * st.t);
  // Keep h2 small: shift a multiple of g2 from h2 into h1.
  auto red = divide_by_monic(h2, g2, x);
  h2 = red.remainder;
  h1 = h1 + red.quotient * g1;
  Poly zero(ctx);
  UnimodularCompletion out{{{g1, zero, xn}, {zero, g2, xn}, {h1, h2, h3}}, h1, h2, h3};
  if (det(out.matrix, ctx) != Poly::one(ctx)) throw VerificationError("complete_unimodular: determinant is not 1");
  return out;
}

/// g2 = g20 + c x^n for the least c >= 0 with gcd(g1, g2) = 1.
inline Poly coprime_adjust(const Poly& g1, const Poly& g20, std::size_t x, int n) {
  const CtxPtr& ctx = g1.ctx();
  if (g1.coeff_in(x, 0) != Poly::one(ctx) || g20.coeff_in(x, 0) != Poly::one(ctx))
    throw Error("coprime_adjust: g1(0) and g2(0) must equal 1");
  Poly xn = Poly::var(ctx, x, n);
  for (long c = 0; c <= g1.degree(x) + 1; ++c) {
    Poly g2 = g20 + xn.scaled(Rational(c));
    if (coprime(g1, g2, x)) return g2;
  }
  throw VerificationError("coprime_adjust: no coprime shift found within deg(g1)+1 steps");
}

}  // namespace cylcert
