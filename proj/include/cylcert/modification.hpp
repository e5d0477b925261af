#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/division.hpp"
#include "cylcert/errors.hpp"
#include "cylcert/linbez.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/ringhom.hpp"
#include "cylcert/series.hpp"

namespace cylcert {

/// The ideal (x^n, F) with F monic up to a unit mod x^n in `monic_var`.
template <class C>
struct IdealXN {
  std::size_t x;
  int n;
  MPoly<C> F;
  std::size_t monic_var;

  IdealXN(std::size_t x_, int n_, MPoly<C> F_, std::size_t monic_var_)
      : x(x_), n(n_), F(std::move(F_)), monic_var(monic_var_) {
    const CtxPtr& ctx = F.ctx();
    if (n < 1) throw Error("IdealXN: n must be positive");
    if (ctx->laurent(x) || ctx->laurent(monic_var)) throw ContextError("IdealXN: x and the monic variable must not be Laurent");
    const int d = F.degree(monic_var);
    if (d < 1) throw Error("IdealXN: F has no positive degree in '" + ctx->name(monic_var) + "'");
    MPoly<C> lc = F.coeff_in(monic_var, d);
    if (!lc.coeff_in(x, 0).unit_inverse())
      throw NotUnitError("IdealXN: leading coefficient of F in '" + ctx->name(monic_var) +
                         "' is not a unit mod " + ctx->name(x) + "^" + std::to_string(n));
  }

  const CtxPtr& ctx() const { return F.ctx(); }
  MPoly<C> xn() const { return MPoly<C>::var(ctx(), x, n); }
};

/// Either G = x^n Q + u F (member) or the reduced remainder mod x^n.
template <class C>
struct Membership {
  bool member = false;
  MPoly<C> Q, u, remainder;

  bool reconstructs(const MPoly<C>& G, const IdealXN<C>& I) const {
    return member && I.xn() * Q + u * I.F == G;
  }
};

template <class C>
Membership<C> ideal_member(const MPoly<C>& G, const IdealXN<C>& I) {
  require_same_ctx(G.ctx(), I.ctx(), "ideal_member");
  auto [q, rem] = divide_by_monic(G, I.F, I.monic_var, TruncSpec{I.x, I.n});
  Membership<C> out;
  out.remainder = rem.truncated(I.x, I.n);
  if (!out.remainder.is_zero()) return out;
  out.member = true;
  out.u = q.truncated(I.x, I.n);
  out.Q = (G - out.u * I.F).exact_div_pow(I.x, I.n);
  if (!out.reconstructs(G, I)) throw VerificationError("ideal_member: reconstruction failed");
  return out;
}

template <class C>
struct IdealEquality {
  bool equal = false;
  Membership<C> second_in_first;  // F2 in I1
  Membership<C> first_in_second;  // F1 in I2
};

template <class C>
IdealEquality<C> ideal_equal(const IdealXN<C>& I1, const IdealXN<C>& I2) {
  require_same_ctx(I1.ctx(), I2.ctx(), "ideal_equal");
  if (I1.n != I2.n || I1.x != I2.x) throw Error("ideal_equal: ideals use different powers of x");
  IdealEquality<C> out;
  out.second_in_first = ideal_member(I2.F, I1);
  out.first_in_second = ideal_member(I1.F, I2);
  out.equal = out.second_in_first.member && out.first_in_second.member;
  return out;
}

/// a p + b x^n = 1, so x^-n F = a (x^-n p F) + b F and both subrings
/// k[x, z, t][x^-n F] and k[x, z, t][x^-n p F] coincide.
inline BezoutCert<Rational> subring_rescale_equal(int n, const Poly& p, std::size_t x) {
  if (p.coeff_in(x, 0).is_zero()) throw Error("subring_rescale_equal: p(0) must be nonzero");
  auto r = ext_gcd(p, Poly::var(p.ctx(), x, n), x);
  if (r.g != Poly::one(p.ctx())) throw VerificationError("subring_rescale_equal: p and x^n not comaximal");
  return BezoutCert<Rational>{{p, Poly::var(p.ctx(), x, n)}, {r.s, r.t}, Poly::one(p.ctx())};
}

/// Hypersurface eq = 0 in the ambient context.
template <class C>
struct VarietyEq {
  std::string name;
  MPoly<C> eq;

  VarietyEq(std::string name_, MPoly<C> eq_) : name(std::move(name_)), eq(std::move(eq_)) {
    if (eq.is_zero()) throw Error("VarietyEq '" + name + "': zero equation");
  }
  const CtxPtr& ctx() const { return eq.ctx(); }
};

/// Pullback of eq_tgt equals cofactor * eq_src, or the division remainder.
template <class C>
struct MapCheck {
  bool pass = false;
  MPoly<C> pullback, cofactor, remainder;
  bool unit_cofactor = false;
};

/// h is the comorphism k[V_tgt] -> k[V_src].
template <class C>
MapCheck<C> verify_variety_map(const RingHom<C>& h, const VarietyEq<C>& src, const VarietyEq<C>& tgt) {
  if (!same_ctx(h.source(), tgt.ctx()) || !same_ctx(h.target(), src.ctx()))
    throw ContextError("verify_variety_map: hom contexts do not match the varieties");
  MapCheck<C> out;
  out.pullback = h.apply(tgt.eq);
  auto r = reduce_by(out.pullback, src.eq);
  out.cofactor = r.quotient;
  out.remainder = r.remainder;
  out.pass = r.remainder.is_zero() && !r.quotient.is_zero();
  out.unit_cofactor = out.pass && r.quotient.unit_inverse().has_value();
  return out;
}

template <class C>
struct IsoCheck {
  bool pass = false;
  MapCheck<C> forward, backward;
  /// Variables whose round trip fails to return them modulo the equation.
  std::vector<std::string> failed_round_trips;
  /// q with round_trip(v) - v = q * eq, keyed "side:var".
  std::map<std::string, MPoly<C>> round_trip_quotients;
};

/// Both directions map the varieties into each other and the two
/// compositions are the identity modulo the defining equations.
template <class C>
IsoCheck<C> verify_isomorphism(const RingHom<C>& h, const RingHom<C>& hinv, const VarietyEq<C>& src,
                               const VarietyEq<C>& tgt) {
  IsoCheck<C> out;
  out.forward = verify_variety_map(h, src, tgt);
  out.backward = verify_variety_map(hinv, tgt, src);
  auto check_round = [&](const RingHom<C>& rt, const VarietyEq<C>& v, const std::string& side) {
    for (std::size_t i = 0; i < v.ctx()->size(); ++i) {
      MPoly<C> diff = rt.image(i) - MPoly<C>::var(v.ctx(), i);
      const std::string key = side + ":" + v.ctx()->name(i);
      if (auto q = divide_exact(diff, v.eq)) out.round_trip_quotients.emplace(key, std::move(*q));
      else out.failed_round_trips.push_back(key);
    }
  };
  check_round(compose_hom(hinv, h), tgt, tgt.name);
  check_round(compose_hom(h, hinv), src, src.name);
  out.pass = out.forward.pass && out.backward.pass && out.failed_round_trips.empty();
  return out;
}

/// Lift of a base hom phi through the affine modification. Both varieties
/// are x^n y + F = 0 with F free of y; phi maps the target context to the
/// source context with phi(x) = kappa x and phi(F_tgt) = x^n Q + u F_src.
/// The lift sends y_tgt to kappa^-n (u y_src - Q), so that
/// lift(eq_tgt) = u eq_src exactly.
template <class C>
struct ModificationLift {
  RingHom<C> hom;
  Membership<C> membership;
  MapCheck<C> check;
};

template <class C>
ModificationLift<C> lift_modification_auto(const RingHom<C>& phi, const IdealXN<C>& I_src, const IdealXN<C>& I_tgt,
                                           std::size_t y_src, std::size_t y_tgt) {
  const CtxPtr& src = I_src.ctx();
  const CtxPtr& tgt = I_tgt.ctx();
  if (!same_ctx(phi.source(), tgt) || !same_ctx(phi.target(), src))
    throw ContextError("lift_modification_auto: phi must map the target context into the source context");
  if (I_src.n != I_tgt.n) throw Error("lift_modification_auto: centers use different powers of x");
  const int n = I_src.n;
  if (I_src.F.involves(y_src) || I_tgt.F.involves(y_tgt))
    throw Error("lift_modification_auto: center equations must not involve y");
  for (std::size_t i = 0; i < tgt->size(); ++i)
    if (i != y_tgt && phi.image(i).involves(y_src))
      throw Error("lift_modification_auto: base image of '" + tgt->name(i) + "' involves y");
  MPoly<C> xs = MPoly<C>::var(src, I_src.x);
  auto kappa = divide_exact(phi.image(I_tgt.x), xs);
  std::optional<MPoly<C>> kappa_inv = kappa ? kappa->unit_inverse() : std::nullopt;
  if (!kappa_inv)
    throw Error("lift_modification_auto: phi(x) is not a unit multiple of x");
  ModificationLift<C> out;
  out.membership = ideal_member(phi.apply(I_tgt.F), I_src);
  if (!out.membership.member)
    throw VerificationError("lift_modification_auto: phi(F_tgt) is not in the source center; remainder " +
                            std::to_string(out.membership.remainder.size()) + " terms");
  std::vector<MPoly<C>> imgs = phi.images();
  MPoly<C> y = MPoly<C>::var(src, y_src);
  imgs[y_tgt] = (out.membership.u * y - out.membership.Q) * kappa_inv->pow(static_cast<unsigned>(n));
  out.hom = RingHom<C>(tgt, src, std::move(imgs));
  VarietyEq<C> vsrc("src", I_src.xn() * y + I_src.F);
  VarietyEq<C> vtgt("tgt", MPoly<C>::var(tgt, I_tgt.x, n) * MPoly<C>::var(tgt, y_tgt) + I_tgt.F);
  out.check = verify_variety_map(out.hom, vsrc, vtgt);
  if (!out.check.pass || out.check.cofactor != out.membership.u)
    throw VerificationError("lift_modification_auto: lifted map fails verification");
  return out;
}

}  // namespace cylcert
