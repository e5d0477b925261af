#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/errors.hpp"
#include "cylcert/modification.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/poly_io.hpp"
#include "cylcert/tower.hpp"

namespace cylcert {

/// lambda^d = s for each entry.
struct MultEquation {
  int d;
  Rational s;
};
using MultSystem = std::vector<MultEquation>;

/// lambda^g = m with g = gcd(d_i) = sum c_i d_i and m = prod s_i^c_i.
struct MultSolution {
  int g = 1;
  Rational m{1};
  std::vector<long> bezout;  // c_i
};

/// First equation violated by the candidate, with the value m^(d/g) found.
struct MultObstruction {
  std::size_t index;
  Rational found;
};

struct MultOutcome {
  std::optional<MultSolution> solution;
  std::optional<MultObstruction> obstruction;
  int g = 1;
  Rational m{1};
};

inline MultOutcome solve_mult_system_detail(const MultSystem& sys) {
  MultOutcome out;
  if (sys.empty()) {
    out.solution = MultSolution{1, Rational(1), {}};
    return out;
  }
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (sys[i].d < 1) throw Error("solve_mult_system: exponents must be positive");
    if (sys[i].s.is_zero()) throw Error("solve_mult_system: right-hand sides must be nonzero");
    for (std::size_t j = 0; j < i; ++j)
      if (sys[j].d == sys[i].d && sys[j].s != sys[i].s) {
        out.obstruction = MultObstruction{i, sys[j].s};
        return out;
      }
  }
  // Running Bezout: g = sum c_i d_i.
  std::vector<long> c(sys.size(), 0);
  long g = sys[0].d;
  c[0] = 1;
  for (std::size_t i = 1; i < sys.size(); ++i) {
    IntBezout b = int_ext_gcd(g, sys[i].d);
    for (std::size_t j = 0; j < i; ++j) c[j] *= b.s;
    c[i] = b.t;
    g = b.g;
  }
  Rational m(1);
  for (std::size_t i = 0; i < sys.size(); ++i) m *= sys[i].s.pow(c[i]);
  out.g = static_cast<int>(g);
  out.m = m;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    Rational v = m.pow(sys[i].d / g);
    if (v != sys[i].s) {
      out.obstruction = MultObstruction{i, v};
      return out;
    }
  }
  out.solution = MultSolution{static_cast<int>(g), m, c};
  return out;
}

inline std::optional<MultSolution> solve_mult_system(const MultSystem& sys) {
  return solve_mult_system_detail(sys).solution;
}

enum class IsoVerdict { Iso, NotIso };

struct ClassifyResult {
  IsoVerdict verdict = IsoVerdict::NotIso;
  int n = 2;
  std::vector<Rational> a1, a2;  // coefficients below x^(n-1)
  Rational epsilon{1};
  MultSystem system;
  std::optional<MultSolution> solution;
  std::optional<MultObstruction> obstruction;
  std::vector<int> support_mismatch;  // indices where exactly one a_{i,k} vanishes
  std::string reason;
};

/// Coefficients of p (a polynomial in x alone) below x^count.
inline std::vector<Rational> low_coeffs(const Poly& p, std::size_t x, int count) {
  for (std::size_t i = 0; i < p.ctx()->size(); ++i)
    if (i != x && p.involves(i)) throw ContextError("expected a polynomial in '" + p.ctx()->name(x) + "' only");
  std::vector<Rational> out;
  for (int k = 0; k < count; ++k) out.push_back(p.coeff_in(x, k).constant_term());
  return out;
}

/// Decides whether p2 = eps p1(lambda x) mod x^(n-1) for some nonzero complex lambda, eps.
inline ClassifyResult classify_iso(int n, const Poly& p1, const Poly& p2, std::size_t x = 0) {
  if (n < 2) throw Error("classify_iso: n must be at least 2");
  ClassifyResult out;
  out.n = n;
  out.a1 = low_coeffs(p1, x, n - 1);
  out.a2 = low_coeffs(p2, x, n - 1);
  if (out.a1[0].is_zero() || out.a2[0].is_zero()) throw Error("classify_iso: p1(0) and p2(0) must be nonzero");
  out.epsilon = out.a2[0] / out.a1[0];
  for (int k = 1; k < n - 1; ++k)
    if (out.a1[k].is_zero() != out.a2[k].is_zero()) out.support_mismatch.push_back(k);
  if (!out.support_mismatch.empty()) {
    out.reason = "coefficient supports differ";
    return out;
  }
  for (int k = 1; k < n - 1; ++k)
    if (!out.a1[k].is_zero()) out.system.push_back({k, out.a2[k] / out.a1[k] / out.epsilon});
  auto res = solve_mult_system_detail(out.system);
  out.obstruction = res.obstruction;
  out.solution = res.solution;
  if (!out.solution) {
    out.reason = "multiplicative system has no solution";
    return out;
  }
  out.verdict = IsoVerdict::Iso;
  return out;
}

/// Explicit isomorphism V_{n,p2} -> V_{n,p1}, given as the comorphism
/// k[V_{n,p1}] -> k[V_{n,p2}] together with its inverse.
struct IsoWitness {
  TowerPtr ring;
  TowerElem lambda, epsilon, mu;
  int g = 1;
  Rational m{1};
  RingHom<TowerElem> forward;   // k[V_{p1}] -> k[V_{p2}]
  RingHom<TowerElem> backward;  // k[V_{p2}] -> k[V_{p1}]
  TPoly K;
  IsoCheck<TowerElem> check;
};

inline CtxPtr xyzt_ctx() {
  static const CtxPtr ctx = make_ctx({"x", "y", "z", "t"});
  return ctx;
}

/// V_{n,p}: x^n y + z^2 + t^3 + x p(x) = 0 in (x, y, z, t).
inline Poly v_equation(int n, const Poly& p_in_x) {
  const auto& c = xyzt_ctx();
  Poly p = embed(p_in_x, c);
  return Poly::var(c, "x", n) * Poly::var(c, "y") + parse_poly("z^2 + t^3", c) + Poly::var(c, "x") * p;
}

inline IsoWitness witness_automorphism(int n, const Poly& p1_in, const Poly& p2_in, const ClassifyResult& cls) {
  if (cls.verdict != IsoVerdict::Iso || !cls.solution) throw Error("witness_automorphism: classifier did not return Iso");
  const auto& c = xyzt_ctx();
  const Poly p1 = embed(p1_in, c), p2 = embed(p2_in, c);
  IsoWitness w;
  w.g = cls.solution->g;
  w.m = cls.solution->m;
  w.ring = Tower::rationals();
  if (auto root = w.m.root(static_cast<unsigned>(w.g))) {
    w.lambda = TowerElem(*root);
  } else {
    w.ring = w.ring->adjoin_root("lam", w.g, TowerElem(w.m));
    w.lambda = w.ring->gen(0);
  }
  w.epsilon = TowerElem(cls.epsilon);
  auto lam_inv = w.lambda.inverse();
  if (!lam_inv) throw NotUnitError("witness_automorphism: lambda is not invertible");
  TowerElem mu6 = w.epsilon * *lam_inv;
  std::optional<Rational> mu_rat;
  if (mu6.is_rational()) mu_rat = mu6.rational_value().root(6);
  if (mu_rat) {
    w.mu = TowerElem(*mu_rat);
  } else {
    w.ring = w.ring->adjoin_root("mu", 6, mu6);
    w.mu = w.ring->gen(w.ring->height() - 1);
  }
  auto lift = [&](const TowerElem& e) { return e.ring() ? e : e.with_ring(w.ring->height() ? w.ring : nullptr); };
  w.lambda = lift(w.lambda);
  w.mu = lift(w.mu);
  auto mu_inv = w.mu.inverse();
  if (!mu_inv) throw NotUnitError("witness_automorphism: mu is not invertible");
  const TowerElem lam = w.lambda, li = *lam_inv, mu = w.mu, mi = *mu_inv;
  if (!(mu.pow(6) * lam == w.epsilon)) throw VerificationError("witness_automorphism: mu^6 lambda != epsilon");

  auto T = [&](const Poly& p) { return to_tower(p); };
  auto scalar = [&](const TowerElem& e) { return TPoly::constant(c, e); };
  auto subst_x = [&](const TPoly& p, const TowerElem& s) {
    return RingHom<TowerElem>::substitution(c, {{"x", scalar(s) * TPoly::var(c, "x")}}).apply(p);
  };
  const TPoly X = TPoly::var(c, "x"), Y = TPoly::var(c, "y"), Z = TPoly::var(c, "z"), Tt = TPoly::var(c, "t");
  const std::size_t xi = c->index("x");
  TPoly numer = scalar(mi.pow(6)) * T(p2) - scalar(lam) * subst_x(T(p1), lam);
  w.K = numer.exact_div_pow(xi, n - 1);
  const TowerElem lin = li.pow(n);
  w.forward = RingHom<TowerElem>(c, c, {scalar(lam) * X, scalar(lin * mi.pow(6)) * Y + scalar(lin) * w.K,
                                        scalar(mi.pow(3)) * Z, scalar(mi.pow(2)) * Tt});
  w.backward = RingHom<TowerElem>(c, c, {scalar(li) * X, scalar(mu.pow(6) * lam.pow(n)) * Y - scalar(mu.pow(6)) * subst_x(w.K, li),
                                         scalar(mu.pow(3)) * Z, scalar(mu.pow(2)) * Tt});
  VarietyEq<TowerElem> V1("V_p1", T(v_equation(n, p1_in))), V2("V_p2", T(v_equation(n, p2_in)));
  w.check = verify_isomorphism(w.forward, w.backward, V2, V1);
  if (!w.check.pass) throw VerificationError("witness_automorphism: verification failed");
  return w;
}

}  // namespace cylcert
