#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/autonorm.hpp"
#include "cylcert/classify.hpp"
#include "cylcert/cylinder.hpp"
#include "cylcert/geom2.hpp"
#include "cylcert/report.hpp"

namespace cylcert {

/// Malformed manifest or scenario parameters (exit status 2 in the CLI).
class ScenarioError : public Error {
 public:
  using Error::Error;
};

struct Scenario {
  std::string id, kind;
  Json parameters = Json::object();
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::optional<int> jet_order;
  bool timings = false;
};

inline const std::vector<std::string>& scenario_kinds() {
  static const std::vector<std::string> k{"classify",     "cylinder-iso", "analytic-jet", "equ-crit",
                                          "stable-equiv", "center-iso",   "section2"};
  return k;
}

namespace scen {

inline const CtxPtr& x_ctx() {
  static const CtxPtr c = make_ctx({"x"});
  return c;
}

inline const CtxPtr& empty_ctx() {
  static const CtxPtr c = make_ctx({});
  return c;
}

[[noreturn]] inline void bad(const Scenario& s, const std::string& what) {
  throw ScenarioError("scenario '" + s.id + "': " + what);
}

inline std::string json_scalar_text(const Scenario& s, const std::string& key, const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad(s, "parameter '" + key + "' must be a string or an integer");
}

inline Rational rational_param_text(const Scenario& s, const std::string& key, const std::string& text) {
  try {
    Poly q = parse_poly(text, empty_ctx());
    return q.constant_term();
  } catch (const Error& e) {
    bad(s, "parameter '" + key + "': " + e.what());
  }
}

inline std::optional<Json> raw(const Scenario& s, const std::string& key) {
  if (!s.parameters.contains(key) || s.parameters.at(key).is_null()) return std::nullopt;
  return s.parameters.at(key);
}

inline int int_param(const Scenario& s, const std::string& key, std::optional<int> def = std::nullopt) {
  auto v = raw(s, key);
  if (!v) {
    if (def) return *def;
    bad(s, "missing parameter '" + key + "'");
  }
  if (!v->is_number_integer()) bad(s, "parameter '" + key + "' must be an integer");
  return v->get<int>();
}

inline std::uint64_t seed_param(const Scenario& s, std::uint64_t def) {
  auto v = raw(s, "seed");
  if (!v) return def;
  if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
    bad(s, "parameter 'seed' must be a non-negative integer");
  return v->get<std::uint64_t>();
}

inline Rational rational_param(const Scenario& s, const std::string& key, const Rational& def) {
  auto v = raw(s, key);
  if (!v) return def;
  return rational_param_text(s, key, json_scalar_text(s, key, *v));
}

inline std::optional<std::string> string_param(const Scenario& s, const std::string& key) {
  auto v = raw(s, key);
  if (!v) return std::nullopt;
  if (!v->is_string()) bad(s, "parameter '" + key + "' must be a string");
  return v->get<std::string>();
}

/// A polynomial in x; symbols listed under "subs" are replaced by rationals first.
inline Poly poly_param(const Scenario& s, const std::string& key, std::optional<std::string> def = std::nullopt) {
  auto text = string_param(s, key);
  if (!text) {
    if (!def) bad(s, "missing parameter '" + key + "'");
    text = def;
  }
  std::vector<std::string> names{"x"};
  std::vector<std::pair<std::string, Rational>> values;
  if (auto subs = raw(s, "subs")) {
    if (!subs->is_object()) bad(s, "parameter 'subs' must be an object");
    for (const auto& [name, v] : subs->items()) {
      if (name == "x") bad(s, "'x' cannot be substituted");
      names.push_back(name);
      values.emplace_back(name, rational_param_text(s, "subs." + name, json_scalar_text(s, "subs." + name, v)));
    }
  }
  try {
    const CtxPtr c = make_ctx(names);
    Poly p = parse_poly(*text, c);
    std::vector<std::pair<std::string, Poly>> repl;
    for (const auto& [name, q] : values) repl.emplace_back(name, Poly::constant(c, q));
    if (!repl.empty()) p = RingHom<Rational>::substitution(c, repl).apply(p);
    return embed(p, x_ctx());
  } catch (const Error& e) {
    bad(s, "parameter '" + key + "': " + e.what());
  }
}

inline std::string elem_str(const TowerElem& e) { return to_string(TPoly::constant(empty_ctx(), e)); }

inline std::string join(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
  return out;
}

inline TowerPtr nontrivial(const TowerPtr& r) { return r && r->height() ? r : nullptr; }

/// G = x^n Q + u F as a certificate; `g` is the term producing G.
template <class C>
Certificate membership(std::string name, CertTerm g, const Membership<C>& m, const IdealXN<C>& I, const TowerPtr& ring = nullptr) {
  return cert::make(std::move(name), I.ctx(),
                    {std::move(g), cert::term<C>(-1, {I.xn(), m.Q}), cert::term<C>(-1, {m.u, I.F})}, ring);
}

/// det(m) - 1 = 0 by the Leibniz expansion.
template <class C>
Certificate det_one(std::string name, const PolyMatrix<C>& m, const CtxPtr& c) {
  const std::size_t k = m.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<CertTerm> terms;
  do {
    int sign = 1;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    std::vector<MPoly<C>> fs;
    bool zero = false;
    for (std::size_t i = 0; i < k; ++i) {
      zero = zero || m[i][perm[i]].is_zero();
      fs.push_back(m[i][perm[i]]);
    }
    if (!zero) terms.push_back(cert::term<C>(sign, fs));
  } while (std::next_permutation(perm.begin(), perm.end()));
  terms.push_back(cert::term<C>(-1, {MPoly<C>::one(c)}));
  return cert::make(std::move(name), c, std::move(terms));
}

/// p - sum_k a_k x^k = 0 mod x^count.
inline Certificate coefficients(std::string name, const Poly& p, const std::vector<Rational>& a) {
  const CtxPtr& c = x_ctx();
  Certificate out = cert::make(std::move(name), c, {cert::term<Rational>(1, {p})});
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!a[k].is_zero()) out.terms.push_back(cert::term<Rational>(-1, {Poly::constant(c, a[k]), Poly::var(c, 0, static_cast<int>(k))}));
  out.mod = std::make_pair(std::string("x"), static_cast<int>(a.size()));
  return out;
}

inline Poly constant(const Rational& q) { return Poly::constant(empty_ctx(), q); }

}  // namespace scen

inline constexpr const char* kNotIsoCaveat =
    "a not_iso verdict rests on the necessity direction of the classification theorem, which depends on "
    "invariant-theoretic descent not re-verified here; the certificates establish only that the scalar system "
    "has no solution";

inline void run_classify(const Scenario& s, const RunOptions&, VerificationReport& r) {
  const int n = scen::int_param(s, "n");
  const Poly p1 = scen::poly_param(s, "p1"), p2 = scen::poly_param(s, "p2");
  const auto expect = scen::string_param(s, "expect");
  if (expect && *expect != "iso" && *expect != "not_iso") scen::bad(s, "expect must be 'iso' or 'not_iso'");
  const ClassifyResult cls = classify_iso(n, p1, p2);
  const bool iso = cls.verdict == IsoVerdict::Iso;
  r.summary["classification"] = iso ? "iso" : "not_iso";
  r.summary["epsilon"] = cls.epsilon.str();
  r.summary["a1"] = scen::join(cls.a1);
  r.summary["a2"] = scen::join(cls.a2);
  r.add(scen::coefficients("coefficients.p1", p1, cls.a1));
  r.add(scen::coefficients("coefficients.p2", p2, cls.a2));
  r.add(cert::make("epsilon", scen::empty_ctx(),
                   {cert::term<Rational>(1, {scen::constant(cls.epsilon), scen::constant(cls.a1[0])}),
                    cert::term<Rational>(-1, {scen::constant(cls.a2[0])})}));
  bool certified = false;
  if (iso) {
    const IsoWitness w = witness_automorphism(n, p1, p2, cls);
    r.summary["lambda"] = scen::elem_str(w.lambda);
    r.summary["mu"] = scen::elem_str(w.mu);
    r.summary["g"] = w.g;
    r.summary["m"] = w.m.str();
    r.add_hom("forward", w.forward);
    r.add_hom("backward", w.backward);
    VarietyEq<TowerElem> V1("V_p1", to_tower(v_equation(n, p1))), V2("V_p2", to_tower(v_equation(n, p2)));
    r.add_iso("witness", {"forward"}, {"backward"}, V2, V1, w.check,
              scen::nontrivial(w.ring));
    certified = w.check.pass;
  } else {
    r.caveats.push_back(kNotIsoCaveat);
    r.summary["reason"] = cls.reason;
    for (int k : cls.support_mismatch) {
      const auto& zero = cls.a1[k].is_zero() ? cls.a1[k] : cls.a2[k];
      const auto& other = cls.a1[k].is_zero() ? cls.a2[k] : cls.a1[k];
      Certificate c = cert::make("support_mismatch.x^" + std::to_string(k), scen::empty_ctx(),
                                 {cert::term<Rational>(1, {scen::constant(zero)})});
      c.nonzero.push_back(other.str());
      r.add(std::move(c));
      certified = true;
    }
    // s_k a1_k epsilon = a2_k, then a pair with s_i^(d_j/g) != s_j^(d_i/g).
    const auto& sys = cls.system;
    for (std::size_t i = 0; i < sys.size() && !certified; ++i)
      for (std::size_t j = i + 1; j < sys.size() && !certified; ++j) {
        const int g = std::gcd(sys[i].d, sys[j].d);
        const int ei = sys[j].d / g, ej = sys[i].d / g;
        const Rational lhs = sys[i].s.pow(ei), rhs = sys[j].s.pow(ej);
        if (lhs == rhs) continue;
        for (std::size_t k : {i, j}) {
          const int d = sys[k].d;
          r.add(cert::make("ratio.x^" + std::to_string(d), scen::empty_ctx(),
                           {cert::term<Rational>(1, {scen::constant(sys[k].s), scen::constant(cls.a1[d]), scen::constant(cls.epsilon)}),
                            cert::term<Rational>(-1, {scen::constant(cls.a2[d])})}));
        }
        std::vector<Poly> fi(static_cast<std::size_t>(ei), scen::constant(sys[i].s));
        std::vector<Poly> fj(static_cast<std::size_t>(ej), scen::constant(sys[j].s));
        Certificate c = cert::make("power_mismatch.x^" + std::to_string(sys[i].d) + ".x^" + std::to_string(sys[j].d),
                                   scen::empty_ctx(),
                                   {cert::term<Rational>(1, {scen::constant(lhs - rhs)}), cert::term<Rational>(-1, fi),
                                    cert::term<Rational>(1, fj)});
        c.nonzero.push_back((lhs - rhs).str());
        r.add(std::move(c));
        certified = true;
      }
    if (!certified) r.caveats.push_back("no pairwise obstruction found for the scalar system");
  }
  const std::string got = iso ? "iso" : "not_iso";
  r.verdict = certified && (!expect || *expect == got) ? Verdict::Pass : Verdict::Fail;
}

inline void run_cylinder_iso(const Scenario& s, const RunOptions&, VerificationReport& r) {
  const int n = scen::int_param(s, "n");
  const Poly p = scen::poly_param(s, "p");
  const CtxPtr& c = xyztw_ctx();
  if (scen::raw(s, "p2")) {
    const Poly p2 = scen::poly_param(s, "p2");
    const CylinderHubIso h = cylinder_hub_iso(n, p, p2);
    r.add_hom("first.forward", h.first.forward);
    r.add_hom("first.backward", h.first.backward);
    r.add_hom("second.forward", h.second.forward);
    r.add_hom("second.backward", h.second.backward);
    VarietyEq<Rational> V1("V_p1_x_A1", v_eq_in(c, n, p)), V2("V_p2_x_A1", v_eq_in(c, n, p2));
    r.add_iso("hub", {"first.forward", "second.backward"}, {"second.forward", "first.backward"}, V2, V1, h.check);
    r.summary["failed_round_trips"] = h.check.failed_round_trips;
    r.verdict = h.check.pass ? Verdict::Pass : Verdict::Fail;
    return;
  }
  const CylinderIsoBundle b = build_cylinder_iso(n, p);
  const std::size_t x = c->index("x"), z = c->index("z");
  r.summary["lambda"] = b.lambda.str();
  r.summary["p_normalized"] = to_string(b.p_norm);
  r.summary["g1"] = to_string(b.g1);
  r.summary["g2"] = to_string(b.g2);
  r.add_hom("base", b.base);
  r.add_hom("forward", b.forward);
  r.add_hom("backward", b.backward);
  auto congruence = [&](const std::string& name, const Poly& g, int k) {
    Certificate cc = cert::make(name, c, {cert::term<Rational>(1, std::vector<Poly>(static_cast<std::size_t>(k), g)),
                                          cert::term<Rational>(-1, {b.p_norm})});
    cc.mod = std::make_pair(std::string("x"), n);
    r.add(std::move(cc));
  };
  congruence("g1_square", b.g1, 2);
  congruence("g2_cube", b.g2, 3);
  r.add(scen::det_one("base_matrix_det", b.matrix, c));
  const Poly X = Poly::var(c, x);
  const IdealXN<Rational> I1(x, n, detail::r_plus(c, X), z);
  const Poly Fp = detail::r_plus(c, X * b.p_norm);
  const IdealXN<Rational> IA(x, n, b.base.apply(Fp), z);
  r.add(scen::membership("base_ideal.image_in_target", cert::term<Rational>(1, {Fp}, {"base"}), b.base_ideal.first_in_second, I1));
  {
    // r + x = x^n Q + u base(r + x p)
    const auto& m = b.base_ideal.second_in_first;
    r.add(cert::make("base_ideal.target_in_image", c,
                     {cert::term<Rational>(1, {I1.F}), cert::term<Rational>(-1, {I1.xn(), m.Q}),
                      cert::term<Rational>(-1, {m.u, Fp}, {"base"})}));
  }
  VarietyEq<Rational> Vp("V_p_x_A1", v_eq_in(c, n, b.p)), V1("V_1_x_A1", v_eq_in(c, n, Poly::one(c)));
  r.add_iso("cylinder", {"forward"}, {"backward"}, V1, Vp, b.check);
  r.verdict = b.check.pass ? Verdict::Pass : Verdict::Fail;
}

inline void run_analytic_jet(const Scenario& s, const RunOptions& opt, VerificationReport& r) {
  const int n = scen::int_param(s, "n");
  const Poly p = scen::poly_param(s, "p");
  const int N = scen::int_param(s, "N", opt.jet_order.value_or(16));
  const bool corr = !scen::raw(s, "y_correction") || scen::raw(s, "y_correction")->get<bool>();
  const JetCheck j = analytic_jet_check(n, p, N, corr);
  const CtxPtr& c = xyzt_ctx();
  r.summary["N"] = N;
  r.summary["f"] = to_string(j.f);
  r.summary["residual"] = to_string(j.residual);
  r.add_hom("psi", j.psi);
  Certificate cc = cert::make("jet_pullback", c,
                              {cert::term<Rational>(1, {v_eq_in(c, n, embed(p, c))}, {"psi"}),
                               cert::term<Rational>(-1, {w_eq_in(c, n, embed(p, c))})});
  cc.mod = std::make_pair(std::string("x"), N);
  if (j.pass) r.add(std::move(cc));
  r.verdict = j.pass ? Verdict::Pass : Verdict::Fail;
}

inline void run_equ_crit(const Scenario& s, const RunOptions& opt, VerificationReport& r) {
  const int n = scen::int_param(s, "n");
  const Poly p1x = scen::poly_param(s, "p1");
  const Poly p2x = scen::raw(s, "p2") ? scen::poly_param(s, "p2") : p1x;
  const int factors = scen::int_param(s, "factors", 3);
  r.seed = scen::seed_param(s, opt.seed);
  const CtxPtr& c = xzt_ctx();
  const Poly p1 = embed(p1x, c), p2 = embed(p2x, c);
  const std::string expect = scen::string_param(s, "expect").value_or(p1 == p2 ? "equal" : "precondition_failed");
  const TruncAuto phi = sample_automorphism(r.seed, n, p1, factors);
  const NormalizationTrace tr = equcrit_normalize(n, p1, p2, phi);
  r.summary["outcome"] = to_string(tr.verdict);
  r.summary["diagnostic"] = tr.diagnostic;
  Json steps = Json::array();
  for (const auto& st : tr.steps)
    steps.push_back(Json{{"n0", st.n0}, {"u", to_string(st.u)}, {"matched_index", st.matched_index}});
  r.summary["steps"] = steps;
  r.add_hom("phi", phi.hom());
  const Poly x = Poly::var(c, 0), F1 = cusp_r() + x * p1, F2 = cusp_r() + x * p2;
  const std::size_t z = c->index("z"), t = c->index("t");
  auto mod_n = [&](Certificate cc) {
    cc.mod = std::make_pair(std::string("x"), n);
    return cc;
  };
  r.add(mod_n(cert::make("jacobian", c,
                         {cert::term<Rational>(1, {phi.z_img.derivative(z), phi.t_img.derivative(t)}),
                          cert::term<Rational>(-1, {phi.z_img.derivative(t), phi.t_img.derivative(z)}),
                          cert::term<Rational>(-1, {Poly::one(c)})})));
  const Poly image = phi.apply(F1);
  auto dr = divide_by_monic(image, F2, z, TruncSpec{0, n});
  const Poly rem = dr.remainder.truncated(0, n);
  Certificate cc = mod_n(cert::make(rem.is_zero() ? "ideal_map" : "ideal_map_obstruction", c,
                                    {cert::term<Rational>(1, {F1}, {"phi"}), cert::term<Rational>(-1, {dr.quotient, F2}),
                                     cert::term<Rational>(-1, {rem})}));
  if (!rem.is_zero()) {
    cc.nonzero.push_back(to_string(rem));
    cc.reduced = std::make_pair(std::string("z"), 2);
    r.summary["remainder"] = to_string(rem);
    r.caveats.push_back("the remainder is reduced modulo a polynomial monic of degree 2 in z, so its being nonzero "
                        "excludes membership");
  }
  r.add(std::move(cc));
  r.verdict = to_string(tr.verdict) == expect ? Verdict::Pass : Verdict::Fail;
}

inline void run_stable_equiv(const Scenario& s, const RunOptions&, VerificationReport& r) {
  const int n = scen::int_param(s, "n");
  const Poly p = scen::poly_param(s, "p");
  const StableEquivReport se = stable_equiv_report(n, p);
  const CtxPtr& c = xyztw_ctx();
  r.summary["classification_against_p_equal_1"] = se.classification.verdict == IsoVerdict::Iso ? "iso" : "not_iso";
  r.summary["counterexample"] = se.counterexample;
  r.summary["note"] = se.note;
  if (se.classification.verdict == IsoVerdict::NotIso) r.caveats.push_back(kNotIsoCaveat);
  r.caveats.push_back("the certificates exhibit an isomorphism of the hypersurfaces in five variables; "
                      "they do not extend it to an automorphism of affine 5-space");
  r.add_hom("forward", se.forward);
  r.add_hom("backward", se.backward);
  VarietyEq<Rational> Vp("V_p_x_A1", v_eq_in(c, n, se.p)), Wp("W_p_x_A1", w_eq_in(c, n, se.p));
  r.add_iso("stable", {"forward"}, {"backward"}, Wp, Vp, se.check);
  r.verdict = se.check.pass ? Verdict::Pass : Verdict::Fail;
}

inline void run_center_iso(const Scenario& s, const RunOptions&, VerificationReport& r) {
  const int n = scen::int_param(s, "n");
  const Poly p = scen::poly_param(s, "p");
  const CenterIso ci = embedded_center_iso(n, p);
  const CtxPtr& c = xzt_center_ctx();
  const TowerPtr ring = scen::nontrivial(ci.ring);
  r.summary["q"] = to_string(ci.q);
  r.summary["g1"] = to_string(ci.g1);
  r.summary["g2"] = to_string(ci.g2);
  r.summary["roots_of_p_orientation_holds"] = ci.stated_orientation.member;
  if (!ci.stated_orientation.member)
    r.caveats.push_back("with square and cube roots of p itself the center is not preserved; the map uses roots of "
                        "q = p^-1 mod x^n");
  r.add_hom("xi", ci.xi);
  const TPoly X = TPoly::var(c, "x"), r_ = to_tower(parse_poly("z^2 + t^3", c)), qt = to_tower(ci.q);
  auto mod_n = [&](Certificate cc) {
    cc.mod = std::make_pair(std::string("x"), n);
    return cc;
  };
  r.add(mod_n(cert::make("center", c,
                         {cert::term<TowerElem>(1, {r_ + X}, {"xi"}),
                          cert::term<TowerElem>(-1, {qt, r_ + X * to_tower(ci.p)})},
                         ring)));
  r.add(mod_n(cert::make("g1_square", c, {cert::term<TowerElem>(1, {ci.g1, ci.g1}), cert::term<TowerElem>(-1, {qt})}, ring)));
  r.add(mod_n(cert::make("g2_cube", c, {cert::term<TowerElem>(1, {ci.g2, ci.g2, ci.g2}), cert::term<TowerElem>(-1, {qt})}, ring)));
  r.add(mod_n(cert::make("q_inverse", c, {cert::term<TowerElem>(1, {qt, to_tower(ci.p)}), cert::term<TowerElem>(-1, {TPoly::one(c)})})));
  r.verdict = ci.pass && ci.unit_cofactor ? Verdict::Pass : Verdict::Fail;
}

/// Certificates for the displayed identities of the section 2 construction.
inline void section2_certificates(const Section2Params& prm, const Section2Data& d, VerificationReport& r) {
  auto attempt = [&](const std::function<void()>& f) {
    try {
      f();
    } catch (const Error&) {
      // the corresponding named check reports the failure
    }
  };
  const CtxPtr& ch = s2_chart_ctx();
  const Poly base = parse_poly("lam^6 - x - x^2", ch), x4 = s2::X(ch, 4);
  r.add(cert::make("xi_identity", ch,
                   {cert::term<Rational>(1, {x4, d.xi}), cert::term<Rational>(-1, {d.sigma, d.sigma}), cert::term<Rational>(1, {base})}));
  r.add(cert::make("tau_definition", ch,
                   {cert::term<Rational>(1, {d.tau}), cert::term<Rational>(-1, {s2::one_plus(-d.alpha / Rational(2), ch), d.sigma})}));
  r.add(cert::make("zeta_identity", ch,
                   {cert::term<Rational>(1, {x4, d.zeta}), cert::term<Rational>(-1, {s2::one_plus(d.alpha, ch), d.tau, d.tau}),
                    cert::term<Rational>(1, {base})}));
  const CtxPtr& a = xyzt_ctx();
  const auto m = gl2_matrix(prm.beta);
  r.add(scen::det_one("gl2_det", m, a));
  r.add_hom("gl2", gl2_hom(m));
  attempt([&] {
    const std::size_t x = a->index("x"), z = a->index("z");
    const Poly GY = s2::one_plus(prm.alpha, a) * s2::P("z^2", a) + s2::P("x + x^2 + t^3", a);
    const IdealXN<Rational> I(x, 4, s2::P("z^2 + t^3 + x + x^2 + x^3", a), z);
    auto mem = ideal_member(gl2_hom(m).apply(GY), I);
    if (mem.member) r.add(scen::membership("gl2_ideal", cert::term<Rational>(1, {GY}, {"gl2"}), mem, I));
  });
  attempt([&] {
    const auto iso = build_x1_y_iso(prm);
    if (!iso.check.pass) return;
    const auto g = variety_gallery(prm.alpha);
    r.add_hom("x1_y.forward", iso.forward);
    r.add_hom("x1_y.backward", iso.backward);
    r.add_iso("x1_y", {"x1_y.forward"}, {"x1_y.backward"}, gallery_entry(g, "X1"),
              gallery_entry(g, "Y"), iso.check);
  });
  for (const auto& chart : section2_charts(d)) {
    attempt([&] {
      if (!trivialization_check(chart).residual.is_zero()) return;
      r.add_hom("chart_" + chart.name, chart.map);
      r.add(cert::make("chart_" + chart.name, chart.map.target(),
                       {cert::term<Rational>(1, {chart.equation}, {"chart_" + chart.name})}));
    });
  }
  attempt([&] {
    const std::size_t x = ch->index("x");
    const Poly two_sigma = d.sigma + d.sigma;
    auto b = bezout_with_xpow(two_sigma, x, 4);
    r.add(cert::make("A0_bezout", ch,
                     {cert::term<Rational>(1, {b.cofactors[0], x4}), cert::term<Rational>(1, {b.cofactors[1], two_sigma}),
                      cert::term<Rational>(-1, {Poly::one(ch)})}));
  });
}

inline void run_section2(const Scenario& s, const RunOptions&, VerificationReport& r) {
  Section2Params prm;
  prm.alpha = scen::rational_param(s, "alpha", prm.alpha);
  prm.beta = scen::rational_param(s, "beta", prm.beta);
  const auto only = scen::string_param(s, "check");
  std::set<std::string> expect_fail;
  if (auto v = scen::raw(s, "expect_fail")) {
    if (!v->is_array()) scen::bad(s, "expect_fail must be an array of check names");
    for (const auto& e : *v) expect_fail.insert(e.get<std::string>());
  }
  const Section2Report rep = section2_suite(prm);
  std::set<std::string> failed, names;
  Json checks = Json::object();
  for (const auto& chk : rep.checks) {
    names.insert(chk.name);
    if (only && chk.name != *only) continue;
    Json data = Json::object();
    for (const auto& [k, v] : chk.data) data[k] = v;
    checks[chk.name] = Json{{"pass", chk.pass}, {"data", data}};
    if (!chk.pass) failed.insert(chk.name);
  }
  if (only && !names.count(*only)) scen::bad(s, "unknown section 2 check '" + *only + "'");
  for (const auto& e : expect_fail)
    if (!names.count(e)) scen::bad(s, "unknown section 2 check '" + e + "' in expect_fail");
  r.summary["checks"] = checks;
  r.summary["failed"] = failed;
  section2_certificates(prm, rep.data, r);
  if (only) {
    const bool want_fail = expect_fail.count(*only) > 0;
    r.verdict = failed.empty() != want_fail ? Verdict::Pass : Verdict::Fail;
  } else {
    r.verdict = failed == expect_fail ? Verdict::Pass : Verdict::Fail;
  }
}

/// Runs one scenario. Engine errors become a failed verdict; malformed
/// parameters raise ScenarioError.
inline VerificationReport run_scenario(const Scenario& s, const RunOptions& opt) {
  VerificationReport r;
  r.id = s.id;
  r.kind = s.kind;
  r.parameters = s.parameters;
  r.seed = opt.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (s.kind == "classify") run_classify(s, opt, r);
    else if (s.kind == "cylinder-iso") run_cylinder_iso(s, opt, r);
    else if (s.kind == "analytic-jet") run_analytic_jet(s, opt, r);
    else if (s.kind == "equ-crit") run_equ_crit(s, opt, r);
    else if (s.kind == "stable-equiv") run_stable_equiv(s, opt, r);
    else if (s.kind == "center-iso") run_center_iso(s, opt, r);
    else if (s.kind == "section2") run_section2(s, opt, r);
    else throw ScenarioError("scenario '" + s.id + "': unknown kind '" + s.kind + "'");
  } catch (const ScenarioError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ScenarioError("scenario '" + s.id + "': " + e.what());
  } catch (const Error& e) {
    r.verdict = Verdict::Fail;
    r.summary["error"] = e.what();
  }
  if (opt.timings)
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace scen {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace scen

/// Manifest: {"scenarios": [{"id", "kind", "parameters"}, ...]}.
inline std::vector<Scenario> parse_manifest(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = scen::line_col(text, at);
    std::string msg = e.what();
    throw ParseError("manifest: " + msg.substr(msg.find(':') + 2), line, col);
  }
  if (!j.is_object() || !j.contains("scenarios") || !j.at("scenarios").is_array())
    throw ScenarioError("manifest: expected an object with a \"scenarios\" array");
  std::vector<Scenario> out;
  std::set<std::string> ids;
  for (const auto& js : j.at("scenarios")) {
    if (!js.is_object() || !js.contains("id") || !js.at("id").is_string() || !js.contains("kind") ||
        !js.at("kind").is_string())
      throw ScenarioError("manifest: every scenario needs string fields \"id\" and \"kind\"");
    Scenario s{js.at("id").get<std::string>(), js.at("kind").get<std::string>(), js.value("parameters", Json::object())};
    if (!ids.insert(s.id).second) throw ScenarioError("manifest: duplicate scenario id '" + s.id + "'");
    const auto& kinds = scenario_kinds();
    if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
      throw ScenarioError("scenario '" + s.id + "': unknown kind '" + s.kind + "'");
    if (!s.parameters.is_object()) throw ScenarioError("scenario '" + s.id + "': parameters must be an object");
    out.push_back(std::move(s));
  }
  return out;
}

/// Reports come back in manifest order whatever the number of jobs.
inline std::vector<VerificationReport> run_manifest(const std::vector<Scenario>& scenarios, const RunOptions& opt,
                                                    unsigned jobs = 1) {
  std::vector<VerificationReport> out(scenarios.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) out[i] = run_scenario(scenarios[i], opt);
    return out;
  }
  for (std::size_t start = 0; start < scenarios.size(); start += jobs) {
    std::vector<std::future<VerificationReport>> batch;
    for (std::size_t i = start; i < std::min(scenarios.size(), start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, run_scenario, std::cref(scenarios[i]), std::cref(opt)));
    for (std::size_t k = 0; k < batch.size(); ++k) out[start + k] = batch[k].get();
  }
  return out;
}

}  // namespace cylcert
