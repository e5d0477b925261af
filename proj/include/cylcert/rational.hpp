#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "cylcert/errors.hpp"

namespace cylcert {

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : value_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(const mpz_class& n) : value_(n) {}  // NOLINT
  Rational(const mpz_class& num, const mpz_class& den) : value_(num, den) {
    if (den == 0) throw Error("rational with zero denominator");
    value_.canonicalize();
  }
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}
  explicit Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

  /// Parses `a` or `a/b` with optional leading sign.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error("empty rational literal");
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(mpz_class(s, 10));
      mpz_class num(s.substr(0, slash), 10);
      mpz_class den(s.substr(slash + 1), 10);
      return Rational(num, den);
    } catch (const std::invalid_argument&) {
      throw Error("malformed rational literal '" + s + "'");
    }
  }

  const mpq_class& raw() const { return value_; }
  mpz_class num() const { return value_.get_num(); }
  mpz_class den() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  Rational inverse() const {
    if (is_zero()) throw NotUnitError("inverse of zero rational");
    return Rational(mpq_class(1) / value_);
  }

  Rational pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
  }

  /// Rational k-th root when one exists (odd k may take negative input).
  std::optional<Rational> root(unsigned k) const {
    if (k == 0) return std::nullopt;
    if (k == 1) return *this;
    if (is_zero()) return Rational(0);
    bool negative = sign() < 0;
    if (negative && k % 2 == 0) return std::nullopt;
    mpz_class n = abs(value_.get_num());
    mpz_class d = value_.get_den();
    mpz_class rn, rd;
    if (mpz_root(rn.get_mpz_t(), n.get_mpz_t(), k) == 0) return std::nullopt;
    if (mpz_root(rd.get_mpz_t(), d.get_mpz_t(), k) == 0) return std::nullopt;
    if (negative) rn = -rn;
    return Rational(rn, rd);
  }

  std::string str() const { return value_.get_str(10); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw NotUnitError("division by zero rational");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  mpq_class value_;
};

/// Extended Euclid on machine integers: returns g = gcd(a,b) >= 0 and s,t with s*a + t*b = g.
struct IntBezout {
  std::int64_t g, s, t;
};

inline IntBezout int_ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r; old_r = r; r = tmp;
    tmp = old_s - q * s; old_s = s; s = tmp;
    tmp = old_t - q * t; old_t = t; t = tmp;
  }
  if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
  return {old_r, old_s, old_t};
}

}  // namespace cylcert
