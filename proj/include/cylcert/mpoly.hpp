#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/errors.hpp"
#include "cylcert/rational.hpp"
#include "cylcert/tower.hpp"
#include "cylcert/varctx.hpp"

namespace cylcert {

using Exponents = std::array<int, VarCtx::kMaxVars>;

inline Exponents zero_exponents() {
  Exponents e{};
  e.fill(0);
  return e;
}

/// Sparse multivariate Laurent polynomial over an exact coefficient ring.
/// Terms are kept in ascending lexicographic order of exponent vectors (in
/// declared variable order) with no stored zeros.
template <class C>
class MPoly {
 public:
  using Coef = C;
  using TermMap = std::map<Exponents, C>;

  MPoly() = default;
  explicit MPoly(CtxPtr ctx) : ctx_(std::move(ctx)) {}

  static MPoly constant(CtxPtr ctx, const C& c) {
    MPoly p(std::move(ctx));
    if (!coef_is_zero(c)) p.terms_.emplace(zero_exponents(), c);
    return p;
  }
  static MPoly one(CtxPtr ctx) { return constant(std::move(ctx), C(1)); }

  static MPoly var(CtxPtr ctx, std::size_t i, int power = 1) {
    Exponents e = zero_exponents();
    e[i] = power;
    return monomial(std::move(ctx), e, C(1));
  }
  static MPoly var(CtxPtr ctx, const std::string& name, int power = 1) {
    std::size_t i = ctx->index(name);
    return var(std::move(ctx), i, power);
  }

  static MPoly monomial(CtxPtr ctx, const Exponents& e, const C& c) {
    MPoly p(std::move(ctx));
    p.check_exponents(e);
    if (!coef_is_zero(c)) p.terms_.emplace(e, c);
    return p;
  }

  const CtxPtr& ctx() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == zero_exponents());
  }
  C constant_term() const {
    auto it = terms_.find(zero_exponents());
    return it == terms_.end() ? C(0) : it->second;
  }
  C coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? C(0) : it->second;
  }

  /// Adds c * monomial(e) in place.
  void add_term(const Exponents& e, const C& c) {
    if (coef_is_zero(c)) return;
    check_exponents(e);
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (coef_is_zero(it->second)) terms_.erase(it);
    }
  }

  MPoly& operator+=(const MPoly& o) {
    adopt_ctx(o, "addition");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    adopt_ctx(o, "subtraction");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator-(const MPoly& a) {
    MPoly r(a.ctx_);
    for (const auto& [e, c] : a.terms_) r.terms_.emplace_hint(r.terms_.end(), e, -c);
    return r;
  }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(a.ctx_);
    r.adopt_ctx(b, "multiplication");
    if (a.is_zero() || b.is_zero()) return r;
    const std::size_t n = r.ctx_ ? r.ctx_->size() : 0;
    std::vector<std::pair<Exponents, C>> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e = ea;
        for (std::size_t i = 0; i < n; ++i) e[i] += eb[i];
        prod.emplace_back(e, ca * cb);
      }
    }
    std::sort(prod.begin(), prod.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < prod.size();) {
      std::size_t j = i + 1;
      C acc = prod[i].second;
      while (j < prod.size() && prod[j].first == prod[i].first) acc += prod[j++].second;
      if (!coef_is_zero(acc)) r.terms_.emplace_hint(r.terms_.end(), prod[i].first, acc);
      i = j;
    }
    return r;
  }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  MPoly scaled(const C& c) const {
    MPoly r(ctx_);
    if (coef_is_zero(c)) return r;
    for (const auto& [e, k] : terms_) {
      C v = k * c;
      if (!coef_is_zero(v)) r.terms_.emplace_hint(r.terms_.end(), e, v);
    }
    return r;
  }

  /// Multiplies by the monomial with exponent vector `shift`.
  MPoly shifted(const Exponents& shift) const {
    MPoly r(ctx_);
    for (const auto& [e, c] : terms_) {
      Exponents ne = e;
      for (std::size_t i = 0; i < VarCtx::kMaxVars; ++i) ne[i] += shift[i];
      r.check_exponents(ne);
      r.terms_.emplace_hint(r.terms_.end(), ne, c);
    }
    return r;
  }

  MPoly pow(unsigned e) const {
    MPoly result = one(ctx_), base = *this;
    while (e > 0) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    return same_ctx(a.ctx_, b.ctx_) && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  int degree(std::size_t v) const {
    int d = 0;
    bool any = false;
    for (const auto& [e, c] : terms_) {
      if (!any || e[v] > d) d = e[v];
      any = true;
    }
    return any ? d : -1;
  }
  /// Lowest exponent of variable v (0 for the zero polynomial).
  int min_degree(std::size_t v) const {
    int d = 0;
    bool any = false;
    for (const auto& [e, c] : terms_) {
      if (!any || e[v] < d) d = e[v];
      any = true;
    }
    return d;
  }
  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  bool involves(std::size_t v) const {
    for (const auto& [e, c] : terms_)
      if (e[v] != 0) return true;
    return false;
  }

  /// Coefficient of v^k, as a polynomial of the same context free of v.
  MPoly coeff_in(std::size_t v, int k) const {
    MPoly r(ctx_);
    for (const auto& [e, c] : terms_) {
      if (e[v] != k) continue;
      Exponents ne = e;
      ne[v] = 0;
      r.terms_.emplace(ne, c);
    }
    return r;
  }

  /// Inverse of coeff_in: sum of coeffs[k] * v^k.
  static MPoly from_coeffs(CtxPtr ctx, std::size_t v, const std::vector<MPoly>& coeffs) {
    MPoly r(ctx);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      for (const auto& [e, c] : coeffs[k].terms_) {
        Exponents ne = e;
        ne[v] += static_cast<int>(k);
        r.add_term(ne, c);
      }
    }
    return r;
  }

  MPoly derivative(std::size_t v) const {
    MPoly r(ctx_);
    for (const auto& [e, c] : terms_) {
      if (e[v] == 0) continue;
      Exponents ne = e;
      ne[v] -= 1;
      r.add_term(ne, c * C(Rational(e[v])));
    }
    return r;
  }

  /// Drops every term whose exponent in v is >= n.
  MPoly truncated(std::size_t v, int n) const {
    MPoly r(ctx_);
    for (const auto& [e, c] : terms_)
      if (e[v] < n) r.terms_.emplace_hint(r.terms_.end(), e, c);
    return r;
  }

  /// Exact division by v^k; every term must carry v-exponent >= k unless v is Laurent.
  MPoly exact_div_pow(std::size_t v, int k) const {
    MPoly r(ctx_);
    for (const auto& [e, c] : terms_) {
      Exponents ne = e;
      ne[v] -= k;
      if (ne[v] < 0 && !ctx_->laurent(v))
        throw DivisionError("exact division by " + ctx_->name(v) + "^" + std::to_string(k) +
                            " fails on a term of " + ctx_->name(v) + "-degree " +
                            std::to_string(e[v]));
      r.terms_.emplace(ne, c);
    }
    return r;
  }

  /// Substitutes v := value (a constant of the coefficient ring).
  MPoly evaluate(std::size_t v, const C& value) const {
    MPoly r(ctx_);
    for (const auto& [e, c] : terms_) {
      Exponents ne = e;
      ne[v] = 0;
      C pw(1);
      if (e[v] >= 0) {
        for (int i = 0; i < e[v]; ++i) pw *= value;
      } else {
        auto inv = coef_inverse(value);
        if (!inv) throw NotUnitError("evaluating a Laurent variable at a non-unit");
        for (int i = 0; i < -e[v]; ++i) pw *= *inv;
      }
      r.add_term(ne, c * pw);
    }
    return r;
  }

  /// Inverse when this is a unit of the Laurent polynomial ring: a single
  /// monomial, supported on Laurent variables only, with unit coefficient.
  std::optional<MPoly> unit_inverse() const {
    if (terms_.size() != 1) return std::nullopt;
    const auto& [e, c] = *terms_.begin();
    for (std::size_t i = 0; i < (ctx_ ? ctx_->size() : 0); ++i)
      if (e[i] != 0 && !ctx_->laurent(i)) return std::nullopt;
    auto inv = coef_inverse(c);
    if (!inv) return std::nullopt;
    Exponents ne = e;
    for (auto& k : ne) k = -k;
    return monomial(ctx_, ne, *inv);
  }

  /// Re-expresses this polynomial in another context with identical layout
  /// prefix (used when a context is extended by new variables).
  MPoly with_ctx(CtxPtr other, const std::vector<std::size_t>& index_map) const {
    MPoly r(other);
    for (const auto& [e, c] : terms_) {
      Exponents ne = zero_exponents();
      for (std::size_t i = 0; i < ctx_->size(); ++i) {
        if (e[i] == 0) continue;
        if (index_map[i] == static_cast<std::size_t>(-1))
          throw ContextError("variable '" + ctx_->name(i) + "' has no image in target context");
        ne[index_map[i]] = e[i];
      }
      r.add_term(ne, c);
    }
    return r;
  }

  /// Applies f to every coefficient (result ring may differ).
  template <class D, class F>
  MPoly<D> map_coeffs(F&& f) const {
    MPoly<D> r(ctx_);
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

  void check_exponents(const Exponents& e) const {
    const std::size_t n = ctx_ ? ctx_->size() : 0;
    for (std::size_t i = 0; i < VarCtx::kMaxVars; ++i) {
      if (e[i] == 0) continue;
      if (i >= n) throw ContextError("exponent on a variable outside the context");
      if (e[i] < 0 && !ctx_->laurent(i))
        throw ContextError("negative exponent on non-Laurent variable '" + ctx_->name(i) + "'");
    }
  }

 private:
  void adopt_ctx(const MPoly& o, const char* what) {
    if (!ctx_) { ctx_ = o.ctx_; return; }
    if (!o.ctx_) return;
    require_same_ctx(ctx_, o.ctx_, what);
  }

  CtxPtr ctx_;
  TermMap terms_;
};

using Poly = MPoly<Rational>;
using TPoly = MPoly<TowerElem>;

/// Maps a context-to-context variable correspondence by name.
inline std::vector<std::size_t> name_map(const VarCtx& from, const VarCtx& to) {
  std::vector<std::size_t> m(from.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = 0; j < to.size(); ++j)
      if (from.name(i) == to.name(j)) m[i] = j;
  return m;
}

/// Re-expresses p in `to`, matching variables by name.
template <class C>
MPoly<C> embed(const MPoly<C>& p, const CtxPtr& to) {
  return p.with_ctx(to, name_map(*p.ctx(), *to));
}

inline TPoly to_tower(const Poly& p) {
  return p.map_coeffs<TowerElem>([](const Rational& q) { return TowerElem(q); });
}

}  // namespace cylcert
