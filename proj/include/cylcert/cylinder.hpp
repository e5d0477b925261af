#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/classify.hpp"
#include "cylcert/division.hpp"
#include "cylcert/errors.hpp"
#include "cylcert/linbez.hpp"
#include "cylcert/matrix.hpp"
#include "cylcert/modification.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/poly_io.hpp"
#include "cylcert/ringhom.hpp"
#include "cylcert/series.hpp"
#include "cylcert/tower.hpp"

namespace cylcert {

/// (x, y, z, t, w): the cylinder coordinates, w spanning the extra line.
inline CtxPtr xyztw_ctx() {
  static const CtxPtr ctx = make_ctx({"x", "y", "z", "t", "w"});
  return ctx;
}

inline CtxPtr xzt_center_ctx() {
  static const CtxPtr ctx = make_ctx({"x", "z", "t"});
  return ctx;
}

namespace detail {

inline Poly r_plus(const CtxPtr& c, const Poly& tail) { return parse_poly("z^2 + t^3", c) + tail; }

inline void require_unit_at_zero(const Poly& p, const char* what) {
  if (p.coeff_in(p.ctx()->index("x"), 0).constant_term().is_zero()) throw Error(std::string(what) + ": p(0) must be nonzero");
}

}  // namespace detail

/// x^n y + z^2 + t^3 + x p(x) in the given context (which must contain x, y, z, t).
inline Poly v_eq_in(const CtxPtr& c, int n, const Poly& p) {
  const Poly x = Poly::var(c, "x");
  return Poly::var(c, "x", n) * Poly::var(c, "y") + detail::r_plus(c, x * embed(p, c));
}

/// x^n y + p(x) (z^2 + t^3 + x).
inline Poly w_eq_in(const CtxPtr& c, int n, const Poly& p) {
  const Poly x = Poly::var(c, "x");
  return Poly::var(c, "x", n) * Poly::var(c, "y") + embed(p, c) * detail::r_plus(c, x);
}

/// V_{n,1} and W_{n,p} as modifications with the same center.
/// forward: k[V_{n,1}] -> k[W_{n,p}], backward: k[W_{n,p}] -> k[V_{n,1}].
struct WIso {
  int n = 2;
  Poly p;
  BezoutCert<Rational> rescale;  // a p + b x^n = 1
  ModificationLift<Rational> to_w, from_w;
  RingHom<Rational> forward, backward;
  IsoCheck<Rational> check;
};

inline WIso build_w_iso(int n, const Poly& p_in, const CtxPtr& c = xyzt_ctx()) {
  if (n < 1) throw Error("build_w_iso: n must be positive");
  WIso out;
  out.n = n;
  out.p = embed(p_in, c);
  detail::require_unit_at_zero(out.p, "build_w_iso");
  const std::size_t x = c->index("x"), y = c->index("y"), z = c->index("z");
  out.rescale = subring_rescale_equal(n, out.p, x);
  if (!out.rescale.verify()) throw VerificationError("build_w_iso: rescaling certificate fails");
  IdealXN<Rational> I1(x, n, detail::r_plus(c, Poly::var(c, x)), z);
  IdealXN<Rational> Iw(x, n, out.p * I1.F, z);
  const auto id = RingHom<Rational>::identity(c);
  out.to_w = lift_modification_auto(id, Iw, I1, y, y);
  out.from_w = lift_modification_auto(id, I1, Iw, y, y);
  // Mapping into W uses the rescaling cofactor a = p^-1 mod x^n as its unit.
  if (out.to_w.membership.u.truncated(x, n) != out.rescale.cofactors[0].truncated(x, n))
    throw VerificationError("build_w_iso: backward unit differs from the Bezout cofactor");
  out.forward = out.to_w.hom;
  out.backward = out.from_w.hom;
  VarietyEq<Rational> V("V_1", v_eq_in(c, n, Poly::one(c))), W("W_p", w_eq_in(c, n, out.p));
  out.check = verify_isomorphism(out.forward, out.backward, W, V);
  if (!out.check.pass) throw VerificationError("build_w_iso: isomorphism check failed");
  return out;
}

/// V_{n,p} x A^1 ~ V_{n,1} x A^1.
/// forward: k[V_{n,p} x A^1] -> k[V_{n,1} x A^1]; backward the inverse.
struct CylinderIsoBundle {
  int n = 2;
  Poly p;             // as given
  Rational lambda{1};  // x -> lambda x, y -> lambda^-n y turns p into p_norm
  Poly p_norm;        // p_norm(0) = 1
  Poly f, g1, g2, g2_unadjusted, h1, h2, h3;
  PolyMatrix<Rational> matrix, matrix_inv;
  RingHom<Rational> base, base_inv;
  IdealEquality<Rational> base_ideal;  // (x^n, base(r + x p_norm)) vs (x^n, r + x)
  ModificationLift<Rational> lift_forward, lift_backward;
  RingHom<Rational> forward, backward;
  IsoCheck<Rational> check;
};

inline CylinderIsoBundle build_cylinder_iso(int n, const Poly& p_in) {
  if (n < 1) throw Error("build_cylinder_iso: n must be positive");
  const CtxPtr& c = xyztw_ctx();
  const std::size_t x = c->index("x"), y = c->index("y"), z = c->index("z"), t = c->index("t"), w = c->index("w");
  CylinderIsoBundle b;
  b.n = n;
  b.p = embed(p_in, c);
  for (std::size_t i = 0; i < c->size(); ++i)
    if (i != x && b.p.involves(i)) throw ContextError("build_cylinder_iso: p must be a polynomial in x");
  const Rational p0 = b.p.coeff_in(x, 0).constant_term();
  if (p0.is_zero()) throw Error("build_cylinder_iso: p(0) must be nonzero");
  b.lambda = p0.inverse();
  const Poly X = Poly::var(c, x), Y = Poly::var(c, y), Z = Poly::var(c, z), T = Poly::var(c, t), Wv = Poly::var(c, w);
  auto scalar = [&](const Rational& q) { return Poly::constant(c, q); };
  RingHom<Rational> norm(c, c, {scalar(b.lambda) * X, scalar(b.lambda.pow(-n)) * Y, Z, T, Wv});
  RingHom<Rational> norm_inv(c, c, {scalar(b.lambda.inverse()) * X, scalar(b.lambda.pow(n)) * Y, Z, T, Wv});
  b.p_norm = norm.apply(b.p).scaled(b.lambda);
  if (norm.apply(v_eq_in(c, n, b.p)) != v_eq_in(c, n, b.p_norm))
    throw VerificationError("build_cylinder_iso: normalization does not carry V_p to V_p_norm");

  b.f = log_unit(TruncSeries<Rational>(b.p_norm, x, n), n).body();
  b.g1 = exp_xmul(b.f.scaled(Rational(1, 2)), x, n).body();
  b.g2_unadjusted = exp_xmul(b.f.scaled(Rational(1, 3)), x, n).body();
  b.g2 = coprime_adjust(b.g1, b.g2_unadjusted, x, n);
  if (!TruncSeries<Rational>(b.g1.pow(2), x, n).congruent(TruncSeries<Rational>(b.p_norm, x, n)) ||
      !TruncSeries<Rational>(b.g2.pow(3), x, n).congruent(TruncSeries<Rational>(b.p_norm, x, n)))
    throw VerificationError("build_cylinder_iso: g1^2 or g2^3 differs from p mod x^n");
  if (b.p_norm == Poly::one(c)) {
    // Nothing to untwist: keep the base identity instead of the generic completion.
    b.h1 = b.h2 = Poly(c);
    b.h3 = Poly::one(c);
    b.matrix = identity_matrix<Rational>(3, c);
  } else {
    auto comp = complete_unimodular(b.g1, b.g2, x, n);
    b.h1 = comp.h1;
    b.h2 = comp.h2;
    b.h3 = comp.h3;
    b.matrix = comp.matrix;
  }
  b.matrix_inv = inverse_unit_det(b.matrix, c);

  // Rows act on the column (z, t, w).
  auto hom_from = [&](const PolyMatrix<Rational>& m) {
    const Poly col[3] = {Z, T, Wv};
    std::vector<Poly> img{X, Y, Poly(c), Poly(c), Poly(c)};
    const std::size_t slot[3] = {z, t, w};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) img[slot[i]] += m[i][j] * col[j];
    return RingHom<Rational>(c, c, std::move(img));
  };
  b.base = hom_from(b.matrix);
  b.base_inv = hom_from(b.matrix_inv);

  IdealXN<Rational> I1(x, n, detail::r_plus(c, X), z);
  IdealXN<Rational> Ip(x, n, detail::r_plus(c, X * b.p_norm), z);
  b.base_ideal = ideal_equal(IdealXN<Rational>(x, n, b.base.apply(Ip.F), z), I1);
  if (!b.base_ideal.equal) throw VerificationError("build_cylinder_iso: base hom does not carry the center onto (x^n, r + x)");

  b.lift_forward = lift_modification_auto(b.base, I1, Ip, y, y);
  if (b.lift_forward.membership.u != b.p_norm.truncated(x, n))
    throw VerificationError("build_cylinder_iso: membership unit is not p mod x^n");
  b.lift_backward = lift_modification_auto(b.base_inv, Ip, I1, y, y);
  b.forward = compose_hom(b.lift_forward.hom, norm);
  b.backward = compose_hom(norm_inv, b.lift_backward.hom);
  VarietyEq<Rational> Vp("V_p x A1", v_eq_in(c, n, b.p)), V1("V_1 x A1", v_eq_in(c, n, Poly::one(c)));
  b.check = verify_isomorphism(b.forward, b.backward, V1, Vp);
  if (!b.check.pass) throw VerificationError("build_cylinder_iso: cylinder isomorphism fails verification");
  return b;
}

/// V_{n,p1} x A^1 ~ V_{n,p2} x A^1 through V_{n,1} x A^1.
/// forward: k[V_{p1} x A^1] -> k[V_{p2} x A^1].
struct CylinderHubIso {
  CylinderIsoBundle first, second;
  RingHom<Rational> forward, backward;
  IsoCheck<Rational> check;
};

inline CylinderHubIso cylinder_hub_iso(int n, const Poly& p1, const Poly& p2) {
  CylinderHubIso h{build_cylinder_iso(n, p1), build_cylinder_iso(n, p2), {}, {}, {}};
  const CtxPtr& c = xyztw_ctx();
  h.forward = compose_hom(h.second.backward, h.first.forward);
  h.backward = compose_hom(h.first.backward, h.second.forward);
  VarietyEq<Rational> V1("V_p1 x A1", v_eq_in(c, n, p1)), V2("V_p2 x A1", v_eq_in(c, n, p2));
  h.check = verify_isomorphism(h.forward, h.backward, V2, V1);
  return h;
}

/// Jet-level check of Psi: W_{n,p} -> V_{n,p} modulo x^N.
struct JetCheck {
  int n = 2, N = 2;
  bool pass = false;
  bool y_correction = true;
  Poly f, e, e2, e3, E;
  RingHom<Rational> psi;  // comorphism k[V_{n,p}] -> k[W_{n,p}] mod x^N
  Poly pullback, residual;
};

inline JetCheck analytic_jet_check(int n, const Poly& p_in, int N, bool y_correction = true) {
  if (n < 1) throw Error("analytic_jet_check: n must be positive");
  if (N < n) throw Error("analytic_jet_check: N must be at least n");
  const CtxPtr& c = xyzt_ctx();
  const std::size_t x = c->index("x");
  JetCheck j;
  j.n = n;
  j.N = N;
  j.y_correction = y_correction;
  const Poly p = embed(p_in, c);
  if (p.coeff_in(x, 0) != Poly::one(c)) throw Error("analytic_jet_check: p(0) must equal 1");
  j.f = log_unit(TruncSeries<Rational>(p, x, n), n).body();
  j.e = exp_xmul(j.f, x, N).body();
  j.e2 = exp_xmul(j.f.scaled(Rational(1, 2)), x, N).body();
  j.e3 = exp_xmul(j.f.scaled(Rational(1, 3)), x, N).body();
  j.E = (j.e - p.truncated(x, N)).exact_div_pow(x, n);
  const Poly r = parse_poly("z^2 + t^3", c);
  const Poly Y = Poly::var(c, "y");
  j.psi = RingHom<Rational>(c, c, {Poly::var(c, "x"), y_correction ? Y - j.E * r : Y, j.e2 * Poly::var(c, "z"),
                                   j.e3 * Poly::var(c, "t")});
  j.pullback = j.psi.apply(v_eq_in(c, n, p), x, N);
  j.residual = (j.pullback - w_eq_in(c, n, p)).truncated(x, N);
  j.pass = j.residual.is_zero();
  return j;
}

/// The 5-variable equivalence of x^n y + r + x p and x^n y + p (r + x)
/// together with the classifier's verdict on the threefolds themselves.
struct StableEquivReport {
  int n = 2;
  Poly p;
  CylinderIsoBundle cylinder;
  WIso w;
  RingHom<Rational> forward, backward;  // k[V_p x A1] <-> k[W_p x A1]
  IsoCheck<Rational> check;
  ClassifyResult classification;  // V_{n,p} against V_{n,1}
  bool counterexample = false;
  std::string note;
};

inline StableEquivReport stable_equiv_report(int n, const Poly& p_in) {
  StableEquivReport s;
  s.n = n;
  const CtxPtr& c = xyztw_ctx();
  const std::size_t x = c->index("x");
  s.p = embed(p_in, c);
  if (s.p.coeff_in(x, 0) != Poly::one(c)) throw Error("stable_equiv_report: p(0) must equal 1");
  s.cylinder = build_cylinder_iso(n, s.p);
  s.w = build_w_iso(n, s.p, c);
  s.forward = compose_hom(s.w.forward, s.cylinder.forward);
  s.backward = compose_hom(s.cylinder.backward, s.w.backward);
  VarietyEq<Rational> Vp("V_p x A1", v_eq_in(c, n, s.p)), Wp("W_p x A1", w_eq_in(c, n, s.p));
  s.check = verify_isomorphism(s.forward, s.backward, Wp, Vp);
  const auto cx = make_ctx({"x"});
  s.classification = classify_iso(n, embed(s.p, cx), Poly::one(cx));
  s.counterexample = s.check.pass && s.classification.verdict == IsoVerdict::NotIso;
  if (s.classification.verdict == IsoVerdict::Iso)
    s.note = "V_{n,p} is already isomorphic to V_{n,1}: not a counterexample";
  else
    s.note = "equivalent in 5 variables, non-isomorphic as threefolds";
  return s;
}

/// xi: (z, t) -> (g1 z, g2 t) on k[x]/(x^n)[z, t] with g1^2 = g2^3 = q = p^-1 mod x^n.
struct CenterIso {
  int n = 2;
  Poly p, q;
  TowerPtr ring;
  TPoly g1, g2;
  RingHom<TowerElem> xi;
  TPoly residual;  // xi(r + x) - q (r + x p) mod x^n
  bool pass = false;
  bool unit_cofactor = false;
  /// The same construction with roots of p: membership of p r + x in (x^n, r + x p).
  Membership<Rational> stated_orientation;
};

inline CenterIso embedded_center_iso(int n, const Poly& p_in) {
  if (n < 1) throw Error("embedded_center_iso: n must be positive");
  const CtxPtr& c = xzt_center_ctx();
  const std::size_t x = c->index("x"), z = c->index("z");
  CenterIso out;
  out.n = n;
  out.p = embed(p_in, c).truncated(x, n);
  const Rational p0 = out.p.coeff_in(x, 0).constant_term();
  if (p0.is_zero()) throw Error("embedded_center_iso: p(0) must be nonzero");
  out.q = inv_series(TruncSeries<Rational>(out.p, x, n)).body();
  const Rational q0 = p0.inverse();
  out.ring = Tower::rationals();
  auto root_of = [&](unsigned k, const std::string& name) {
    if (auto r = q0.root(k)) return TowerElem(*r);
    out.ring = out.ring->adjoin_root(name, static_cast<int>(k), TowerElem(q0));
    return out.ring->gen(out.ring->height() - 1);
  };
  TowerElem s = root_of(2, "s");
  TowerElem cb = root_of(3, "c");
  const TPoly qt = to_tower(out.q);
  out.g1 = kth_root(TruncSeries<TowerElem>(qt, x, n), 2, TPoly::constant(c, s)).body();
  out.g2 = kth_root(TruncSeries<TowerElem>(qt, x, n), 3, TPoly::constant(c, cb)).body();
  const TPoly Z = TPoly::var(c, "z"), T = TPoly::var(c, "t"), X = TPoly::var(c, "x");
  out.xi = RingHom<TowerElem>(c, c, {X, out.g1 * Z, out.g2 * T});
  const TPoly r = Z * Z + T.pow(3);
  out.residual = (out.xi.apply(r + X) - qt * (r + X * to_tower(out.p))).truncated(x, n);
  out.pass = out.residual.is_zero();
  out.unit_cofactor = !q0.is_zero();
  const Poly rr = parse_poly("z^2 + t^3", c), xr = Poly::var(c, x);
  out.stated_orientation = ideal_member(out.p * rr + xr, IdealXN<Rational>(x, n, rr + xr * out.p, z));
  return out;
}

}  // namespace cylcert
