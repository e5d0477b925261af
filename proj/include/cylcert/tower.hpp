#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/errors.hpp"
#include "cylcert/linsolve.hpp"
#include "cylcert/rational.hpp"

namespace cylcert {

// Coefficient rings: the rationals, optionally extended by at most two
// generators u1, u2 with monic relations u1^d1 = R1(u1), u2^d2 = R2(u1, u2).
// Quotients need not be fields; identity checks are valid in any commutative
// ring and inverses are computed only for genuine units.

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;
using GenExps = std::array<int, 2>;
using GenTerms = std::map<GenExps, Rational>;

class TowerElem;

class Tower : public std::enable_shared_from_this<Tower> {
 public:
  static constexpr std::size_t kMaxHeight = 2;

  struct Level {
    std::string name;
    int degree = 1;
    GenTerms rule;  // gen^degree == rule, already reduced
  };

  static TowerPtr rationals() { return TowerPtr(new Tower()); }

  std::size_t height() const { return levels_.size(); }
  const Level& level(std::size_t i) const { return levels_.at(i); }
  const std::vector<Level>& levels() const { return levels_; }

  std::size_t dimension() const {
    std::size_t d = 1;
    for (const auto& l : levels_) d *= static_cast<std::size_t>(l.degree);
    return d;
  }

  /// Adjoins a root u of u^d + c[d-1] u^(d-1) + ... + c[0] (coefficients in this tower).
  TowerPtr adjoin(const std::string& name, const std::vector<TowerElem>& lower_coeffs) const;

  /// Adjoins u with u^k = value.
  TowerPtr adjoin_root(const std::string& name, int k, const TowerElem& value) const;

  TowerElem gen(std::size_t i) const;

  /// Reduces a raw term map to normal form (exponent of level i below d_i).
  GenTerms reduce(GenTerms terms) const {
    for (std::size_t lvl = levels_.size(); lvl-- > 0;) {
      const Level& L = levels_[lvl];
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto it = terms.begin(); it != terms.end(); ++it) {
          if (it->first[lvl] < L.degree) continue;
          GenExps e = it->first;
          Rational c = it->second;
          terms.erase(it);
          e[lvl] -= L.degree;
          for (const auto& [re, rc] : L.rule) {
            GenExps ne{e[0] + re[0], e[1] + re[1]};
            auto& slot = terms[ne];
            slot += c * rc;
          }
          changed = true;
          break;
        }
        for (auto it = terms.begin(); it != terms.end();) {
          if (it->second.is_zero()) it = terms.erase(it); else ++it;
        }
      }
    }
    return terms;
  }

  /// Structural equality of generator names, degrees and relations.
  bool same_levels(const Tower& o, std::size_t count) const {
    if (levels_.size() < count || o.levels_.size() < count) return false;
    for (std::size_t i = 0; i < count; ++i) {
      const auto& a = levels_[i];
      const auto& b = o.levels_[i];
      if (a.name != b.name || a.degree != b.degree || a.rule != b.rule) return false;
    }
    return true;
  }

  static TowerPtr join(const TowerPtr& a, const TowerPtr& b) {
    if (!a || a->height() == 0) return b ? b : a;
    if (!b || b->height() == 0) return a;
    if (a == b) return a;
    const std::size_t common = std::min(a->height(), b->height());
    if (!a->same_levels(*b, common))
      throw ContextError("incompatible coefficient towers");
    return a->height() >= b->height() ? a : b;
  }

 private:
  Tower() = default;
  std::vector<Level> levels_;
};

/// Element of a coefficient tower, stored as a reduced polynomial in the
/// generators. A null ring means a plain rational, compatible with any tower.
class TowerElem {
 public:
  TowerElem() = default;
  TowerElem(const Rational& q) { if (!q.is_zero()) terms_[{0, 0}] = q; }  // NOLINT
  TowerElem(long n) : TowerElem(Rational(n)) {}                             // NOLINT
  TowerElem(int n) : TowerElem(Rational(n)) {}                              // NOLINT
  TowerElem(TowerPtr ring, GenTerms terms) : ring_(std::move(ring)) {
    terms_ = ring_ ? ring_->reduce(std::move(terms)) : std::move(terms);
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second.is_zero()) it = terms_.erase(it); else ++it;
    }
    if (ring_ && ring_->height() == 0) ring_.reset();
  }

  const TowerPtr& ring() const { return ring_; }
  const GenTerms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == GenExps{0, 0});
  }
  Rational rational_value() const {
    if (!is_rational()) throw Error("tower element is not rational");
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  TowerElem with_ring(TowerPtr ring) const { return TowerElem(std::move(ring), terms_); }

  friend TowerElem operator+(const TowerElem& a, const TowerElem& b) {
    GenTerms t = a.terms_;
    for (const auto& [e, c] : b.terms_) t[e] += c;
    return TowerElem(Tower::join(a.ring_, b.ring_), std::move(t));
  }
  friend TowerElem operator-(const TowerElem& a) {
    GenTerms t = a.terms_;
    for (auto& [e, c] : t) c = -c;
    TowerElem r;
    r.ring_ = a.ring_;
    r.terms_ = std::move(t);
    return r;
  }
  friend TowerElem operator-(const TowerElem& a, const TowerElem& b) { return a + (-b); }
  friend TowerElem operator*(const TowerElem& a, const TowerElem& b) {
    GenTerms t;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) t[{ea[0] + eb[0], ea[1] + eb[1]}] += ca * cb;
    return TowerElem(Tower::join(a.ring_, b.ring_), std::move(t));
  }
  TowerElem& operator+=(const TowerElem& o) { return *this = *this + o; }
  TowerElem& operator-=(const TowerElem& o) { return *this = *this - o; }
  TowerElem& operator*=(const TowerElem& o) { return *this = *this * o; }

  friend bool operator==(const TowerElem& a, const TowerElem& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const TowerElem& a, const TowerElem& b) { return !(a == b); }

  TowerElem pow(int e) const {
    if (e < 0) {
      auto inv = inverse();
      if (!inv) throw NotUnitError("negative power of a non-unit tower element");
      return inv->pow(-e);
    }
    TowerElem result(1), base = *this;
    result.ring_ = ring_;
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  /// Inverse in the tower when the element is a unit, found by solving the
  /// multiplication-by-this linear system over the rationals.
  std::optional<TowerElem> inverse() const {
    if (is_zero()) return std::nullopt;
    if (is_rational()) return TowerElem(rational_value().inverse());
    const Tower& T = *ring_;
    const int d0 = T.height() > 0 ? T.level(0).degree : 1;
    const int d1 = T.height() > 1 ? T.level(1).degree : 1;
    std::vector<GenExps> basis;
    for (int b = 0; b < d1; ++b)
      for (int a = 0; a < d0; ++a) basis.push_back({a, b});
    const std::size_t dim = basis.size();
    RationalMatrix m(dim, std::vector<Rational>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
      TowerElem prod = *this * TowerElem(ring_, GenTerms{{basis[j], Rational(1)}});
      for (const auto& [e, c] : prod.terms_) {
        std::size_t i = static_cast<std::size_t>(e[1] * d0 + e[0]);
        m[i][j] = c;
      }
    }
    std::vector<Rational> rhs(dim);
    rhs[0] = 1;
    auto sol = solve_linear(m, rhs);
    if (!sol) return std::nullopt;
    GenTerms t;
    for (std::size_t j = 0; j < dim; ++j)
      if (!(*sol)[j].is_zero()) t[basis[j]] = (*sol)[j];
    TowerElem cand(ring_, std::move(t));
    TowerElem check = cand * *this;
    if (!(check == TowerElem(1))) return std::nullopt;
    return cand;
  }

  /// Human-readable form using generator names; rationals print plainly.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rational mag = c.sign() < 0 ? -c : c;
      out += first ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
      first = false;
      bool has_gen = e[0] != 0 || e[1] != 0;
      std::string mono;
      for (std::size_t lvl = 0; lvl < 2; ++lvl) {
        if (e[lvl] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += ring_->level(lvl).name;
        if (e[lvl] != 1) mono += "^" + std::to_string(e[lvl]);
      }
      if (!has_gen) out += mag.str();
      else if (mag.is_one()) out += mono;
      else out += mag.str() + "*" + mono;
    }
    return out;
  }

 private:
  TowerPtr ring_;
  GenTerms terms_;
};

inline TowerPtr Tower::adjoin(const std::string& name, const std::vector<TowerElem>& lower_coeffs) const {
  if (levels_.size() >= kMaxHeight) throw Error("coefficient tower height is capped at 2");
  if (lower_coeffs.empty()) throw Error("defining polynomial must have positive degree");
  for (const auto& l : levels_)
    if (l.name == name) throw Error("duplicate generator name '" + name + "'");
  std::shared_ptr<Tower> t(new Tower(*this));
  const std::size_t lvl = levels_.size();
  Level L;
  L.name = name;
  L.degree = static_cast<int>(lower_coeffs.size());
  for (std::size_t k = 0; k < lower_coeffs.size(); ++k) {
    for (const auto& [e, c] : lower_coeffs[k].terms()) {
      if (e[lvl] != 0 || (lvl == 0 && e[1] != 0))
        throw Error("defining polynomial coefficients must lie in the lower level");
      GenExps ne = e;
      ne[lvl] = static_cast<int>(k);
      L.rule[ne] -= c;
    }
  }
  for (auto it = L.rule.begin(); it != L.rule.end();) {
    if (it->second.is_zero()) it = L.rule.erase(it); else ++it;
  }
  t->levels_.push_back(std::move(L));
  return t;
}

inline TowerPtr Tower::adjoin_root(const std::string& name, int k, const TowerElem& value) const {
  if (k < 1) throw Error("root degree must be positive");
  std::vector<TowerElem> coeffs(static_cast<std::size_t>(k), TowerElem(0));
  coeffs[0] = -value;
  return adjoin(name, coeffs);
}

inline TowerElem Tower::gen(std::size_t i) const {
  if (i >= levels_.size()) throw Error("no such tower generator");
  GenExps e{0, 0};
  e[i] = 1;
  return TowerElem(shared_from_this(), GenTerms{{e, Rational(1)}});
}

// Uniform coefficient interface used by the polynomial templates.
inline bool coef_is_zero(const Rational& q) { return q.is_zero(); }
inline bool coef_is_zero(const TowerElem& a) { return a.is_zero(); }
inline std::optional<Rational> coef_inverse(const Rational& q) {
  if (q.is_zero()) return std::nullopt;
  return q.inverse();
}
inline std::optional<TowerElem> coef_inverse(const TowerElem& a) { return a.inverse(); }

}  // namespace cylcert
