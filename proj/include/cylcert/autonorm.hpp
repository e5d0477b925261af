#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/division.hpp"
#include "cylcert/errors.hpp"
#include "cylcert/modification.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/poly_io.hpp"

namespace cylcert {

/// Context (x, z, t) used throughout the normalization.
inline CtxPtr xzt_ctx() {
  static const CtxPtr ctx = make_ctx({"x", "z", "t"});
  return ctx;
}

/// C[x]/(x^n)-algebra endomorphism of C[x]/(x^n)[z, t] fixing x.
struct TruncAuto {
  int n = 1;
  Poly z_img, t_img;

  TruncAuto(int n_, Poly z, Poly t) : n(n_), z_img(z.truncated(0, n_)), t_img(t.truncated(0, n_)) {
    require_same_ctx(z_img.ctx(), xzt_ctx(), "TruncAuto");
    require_same_ctx(t_img.ctx(), xzt_ctx(), "TruncAuto");
  }

  static TruncAuto identity(int n) {
    return TruncAuto(n, Poly::var(xzt_ctx(), 1), Poly::var(xzt_ctx(), 2));
  }

  RingHom<Rational> hom() const {
    return RingHom<Rational>(xzt_ctx(), xzt_ctx(), {Poly::var(xzt_ctx(), 0), z_img, t_img});
  }

  Poly apply(const Poly& p) const { return hom().apply(p, std::size_t{0}, n); }

  /// (this o other)(v) = this(other(v)).
  TruncAuto after(const TruncAuto& other) const {
    return TruncAuto(std::min(n, other.n), apply(other.z_img), apply(other.t_img));
  }

  Poly jacobian() const {
    const auto& c = xzt_ctx();
    PolyMatrix<Rational> m{{z_img.derivative(1), z_img.derivative(2)}, {t_img.derivative(1), t_img.derivative(2)}};
    return det(m, c).truncated(0, n);
  }

  friend bool operator==(const TruncAuto& a, const TruncAuto& b) {
    return a.n == b.n && a.z_img == b.z_img && a.t_img == b.t_img;
  }
};

/// Jac(F, G) = dF/dz dG/dt - dF/dt dG/dz.
inline Poly jac_zt(const Poly& F, const Poly& G) {
  return F.derivative(1) * G.derivative(2) - F.derivative(2) * G.derivative(1);
}

/// delta(F) = x^n0 Jac(F, G).
struct JacobianLND {
  int n0;
  Poly G;

  Poly operator()(const Poly& F) const { return jac_zt(F, G) * Poly::var(G.ctx(), 0, n0); }
};

/// Largest n0 <= n with phi = id mod x^n0.
inline int jet_order(const TruncAuto& phi) {
  const auto& c = xzt_ctx();
  Poly dz = phi.z_img - Poly::var(c, 1), dt = phi.t_img - Poly::var(c, 2);
  int n0 = phi.n;
  for (const Poly* d : {&dz, &dt})
    for (const auto& [e, q] : d->terms()) n0 = std::min(n0, e[0]);
  if (n0 < 1) throw Error("jet_order: automorphism is not the identity mod x");
  return n0;
}

inline Poly integrate(const Poly& p, std::size_t v) {
  Poly r(p.ctx());
  for (const auto& [e, c] : p.terms()) {
    Exponents ne = e;
    ne[v] += 1;
    r.add_term(ne, c / Rational(ne[v]));
  }
  return r;
}

/// h with dh/dt = a, dh/dz = -b and h(0, 0) = 0. a and b are free of x.
inline Poly extract_potential(const Poly& a, const Poly& b) {
  Poly div = a.derivative(1) + b.derivative(2);
  if (!div.is_zero())
    throw VerificationError("extract_potential: jet has nonzero divergence " + to_string(div));
  Poly h0 = integrate(a, 2);
  Poly rest = -b - h0.derivative(1);
  if (rest.involves(2)) throw VerificationError("extract_potential: z-part depends on t");
  Poly h = h0 + integrate(rest, 1);
  if (h.derivative(2) != a || h.derivative(1) != -b)
    throw VerificationError("extract_potential: differentiation check failed");
  return h;
}

/// Potential of the x^n0 jet of phi.
inline Poly extract_potential(const TruncAuto& phi, int n0) {
  return extract_potential(phi.z_img.coeff_in(0, n0), phi.t_img.coeff_in(0, n0));
}

inline Poly cusp_r() { return parse_poly("z^2 + t^3", xzt_ctx()); }

struct GammaSplit {
  Poly gamma;
  Rational c;
};

/// h = gamma r + c with r = z^2 + t^3.
inline GammaSplit decompose_gamma(const Poly& h) {
  auto [q, rem] = divide_by_monic(h, cusp_r(), 1);
  if (!rem.is_constant())
    throw VerificationError("decompose_gamma: remainder " + to_string(rem) + " is not constant");
  return {q, rem.constant_term()};
}

/// exp(delta) mod x^n on z and t.
inline TruncAuto exp_lnd(const JacobianLND& d, int n) {
  auto expo = [&](Poly v) {
    Poly sum = v, term = v;
    for (int k = 1;; ++k) {
      term = d(term).truncated(0, n).scaled(Rational(1, k));
      if (term.is_zero()) break;
      sum += term;
    }
    return sum;
  };
  return TruncAuto(n, expo(Poly::var(xzt_ctx(), 1)), expo(Poly::var(xzt_ctx(), 2)));
}

/// One pass of the normalization loop at jet order n0.
struct NormalizationStep {
  int n0 = 0;
  Poly u;           // Phi(F1) = u F2 mod x^n
  Poly h;           // potential of the x^n0 jet
  Poly gamma;       // h = gamma r + c
  Rational c;
  Poly jac_r_h;     // Jac(r, h)
  Poly alpha0;      // x^n0 coefficient of u
  int matched_index = -1;  // k with a_{1,k} = a_{2,k} certified at this step
  std::vector<int> lower_indices;  // indices certified by Phi = id mod x^n0
};

enum class NormVerdict { Equal, NotEqual, PreconditionFailed, CheckFailed };

inline std::string to_string(NormVerdict v) {
  switch (v) {
    case NormVerdict::Equal: return "equal";
    case NormVerdict::NotEqual: return "not_equal";
    case NormVerdict::PreconditionFailed: return "precondition_failed";
    case NormVerdict::CheckFailed: return "check_failed";
  }
  return "unknown";
}

struct NormalizationTrace {
  std::vector<NormalizationStep> steps;
  NormVerdict verdict = NormVerdict::CheckFailed;
  std::string diagnostic;
  Poly remainder;  // set when the ideal-map precondition fails
  std::vector<Rational> a1, a2;
};

namespace detail {

inline std::vector<Rational> x_coeffs(const Poly& p, int count) {
  std::vector<Rational> out;
  for (int k = 0; k < count; ++k) out.push_back(p.coeff_in(0, k).constant_term());
  return out;
}

}  // namespace detail

/// Normalizes phi step by step, certifying a_{1,k} = a_{2,k} for every
/// k <= n - 2 or reporting the first failing check.
inline NormalizationTrace equcrit_normalize(int n, const Poly& p1, const Poly& p2, TruncAuto phi) {
  const auto& c = xzt_ctx();
  NormalizationTrace tr;
  auto fail = [&](NormVerdict v, std::string msg) {
    tr.verdict = v;
    tr.diagnostic = std::move(msg);
    return tr;
  };
  if (n < 2) return fail(NormVerdict::PreconditionFailed, "n must be at least 2");
  if (p1.involves(1) || p1.involves(2) || p2.involves(1) || p2.involves(2))
    return fail(NormVerdict::PreconditionFailed, "p1 and p2 must be polynomials in x");
  if (p1.degree(0) > n - 2 || p2.degree(0) > n - 2)
    return fail(NormVerdict::PreconditionFailed, "deg p_i must be at most n - 2");
  if (phi.n != n) return fail(NormVerdict::PreconditionFailed, "automorphism truncated at a different order");
  tr.a1 = detail::x_coeffs(p1, n - 1);
  tr.a2 = detail::x_coeffs(p2, n - 1);
  const Poly x = Poly::var(c, 0);
  const Poly r = cusp_r();
  const Poly F1 = r + x * p1, F2 = r + x * p2;
  const IdealXN<Rational> I2(0, n, F2, 1);
  try {
    (void)jet_order(phi);
  } catch (const Error& e) {
    return fail(NormVerdict::PreconditionFailed, e.what());
  }
  if (phi.jacobian() != Poly::one(c)) return fail(NormVerdict::PreconditionFailed, "Jacobian determinant is not 1 mod x^n");
  auto pre = ideal_member(phi.apply(F1), I2);
  if (!pre.member) {
    tr.remainder = pre.remainder;
    return fail(NormVerdict::PreconditionFailed, "Phi(x^n, r + x p1) is not contained in (x^n, r + x p2)");
  }
  std::vector<bool> certified(static_cast<std::size_t>(n - 1), false);
  int prev = 0;
  while (true) {
    NormalizationStep st;
    st.n0 = jet_order(phi);
    if (st.n0 <= prev) return fail(NormVerdict::CheckFailed, "jet order did not increase");
    prev = st.n0;
    const Poly phiF1 = phi.apply(F1);
    auto m = ideal_member(phiF1, I2);
    if (!m.member) return fail(NormVerdict::CheckFailed, "ideal map lost at n0 = " + std::to_string(st.n0));
    st.u = m.u;
    if ((st.u - Poly::one(c)).truncated(0, st.n0) != Poly(c))
      return fail(NormVerdict::CheckFailed, "cofactor is not 1 mod x^n0");
    // Phi = id mod x^n0 and u = 1 mod x^n0 give F1 = F2 mod x^n0.
    if ((phiF1 - F1).truncated(0, st.n0) != Poly(c) || (phiF1 - st.u * F2).truncated(0, st.n0) != Poly(c))
      return fail(NormVerdict::CheckFailed, "congruence mod x^n0 failed");
    for (int k = 0; k <= st.n0 - 2 && k <= n - 2; ++k) {
      if (tr.a1[k] != tr.a2[k])
        return fail(NormVerdict::NotEqual, "a_{1," + std::to_string(k) + "} != a_{2," + std::to_string(k) + "}");
      st.lower_indices.push_back(k);
      certified[static_cast<std::size_t>(k)] = true;
    }
    if (st.n0 >= n) {
      tr.steps.push_back(std::move(st));
      break;
    }
    st.alpha0 = st.u.coeff_in(0, st.n0);
    try {
      st.h = extract_potential(phi, st.n0);
    } catch (const Error& e) {
      return fail(NormVerdict::CheckFailed, e.what());
    }
    st.jac_r_h = jac_zt(r, st.h);
    Poly predicted = F1 + st.jac_r_h * Poly::var(c, 0, st.n0);
    if ((phiF1 - predicted).truncated(0, st.n0 + 1) != Poly(c))
      return fail(NormVerdict::CheckFailed, "Phi(r + x p1) differs from r + x p1 + x^n0 Jac(r, h)");
    if (!st.jac_r_h.constant_term().is_zero())
      return fail(NormVerdict::CheckFailed, "Jac(r, h) has a nonzero constant term");
    const int k = st.n0 - 1;
    // a_{1,k} + Jac(r, h) = alpha0 r + a_{2,k}
    Poly lhs = Poly::constant(c, tr.a1[k]) + st.jac_r_h;
    Poly rhs = st.alpha0 * r + Poly::constant(c, tr.a2[k]);
    if (lhs != rhs) {
      if (tr.a1[k] != tr.a2[k])
        return fail(NormVerdict::NotEqual, "a_{1," + std::to_string(k) + "} != a_{2," + std::to_string(k) + "}");
      return fail(NormVerdict::CheckFailed, "order-x^n0 comparison failed");
    }
    st.matched_index = k;
    certified[static_cast<std::size_t>(k)] = true;
    try {
      auto split = decompose_gamma(st.h);
      st.gamma = split.gamma;
      st.c = split.c;
    } catch (const Error& e) {
      return fail(NormVerdict::CheckFailed, e.what());
    }
    const int n0 = st.n0;
    const Poly G = st.gamma * F1;
    tr.steps.push_back(std::move(st));
    if (n0 == n - 1) break;
    TruncAuto theta_inv = exp_lnd(JacobianLND{n0, -G}, n);
    phi = phi.after(theta_inv);
  }
  for (std::size_t k = 0; k < certified.size(); ++k)
    if (!certified[k]) return fail(NormVerdict::CheckFailed, "coefficient " + std::to_string(k) + " not certified");
  if (p1 != p2) return fail(NormVerdict::CheckFailed, "certified coefficients disagree with p1, p2");
  tr.verdict = NormVerdict::Equal;
  return tr;
}

/// Seeded product of exponentials exp(x^k Jac(., gamma (r + x p))) with
/// small random gamma in C[z, t]; each factor preserves (x^n, r + x p).
inline TruncAuto sample_automorphism(std::uint64_t seed, int n, const Poly& p, int factors = 3) {
  const auto& c = xzt_ctx();
  std::mt19937_64 rng(seed);
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  const Poly F = cusp_r() + Poly::var(c, 0) * p;
  TruncAuto phi = TruncAuto::identity(n);
  for (int i = 0; i < factors; ++i) {
    Poly gamma = Poly::constant(c, Rational(pick(-3, 3), pick(1, 3)));
    if (pick(0, 1)) gamma += Poly::var(c, 1).scaled(Rational(pick(-2, 2)));
    if (pick(0, 1)) gamma += Poly::var(c, 2).scaled(Rational(pick(-2, 2)));
    int k = static_cast<int>(pick(1, std::max(1, n - 1)));
    phi = phi.after(exp_lnd(JacobianLND{k, gamma * F}, n));
  }
  return phi;
}

}  // namespace cylcert
