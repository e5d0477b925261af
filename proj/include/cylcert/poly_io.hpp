#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cylcert/errors.hpp"
#include "cylcert/mpoly.hpp"

namespace cylcert {

// Text grammar:
//   poly := term (('+'|'-') term)*
//   term := rational ('*' name ('^' int)?)*
// The parser also accepts a leading sign, an omitted unit coefficient
// ("x^2*y"), and whitespace anywhere between tokens. Output is canonical:
// descending lex order, reduced coefficients, unit coefficients omitted.

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, CtxPtr ctx) : s_(text), ctx_(std::move(ctx)) {}

  Poly parse() {
    Poly result(ctx_);
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (!at_end() && (peek() == '+' || peek() == '-')) {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      skip_ws();
      parse_term(result, sign);
      skip_ws();
      if (at_end()) break;
    }
    return result;
  }

 private:
  void parse_term(Poly& out, int sign) {
    Rational coef(sign);
    Exponents e = zero_exponents();
    bool need_factor = true;
    if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      coef *= parse_rational();
      need_factor = false;
      skip_ws();
      if (at_end() || peek() != '*') {
        out.add_term(e, coef);
        return;
      }
      ++pos_;
      need_factor = true;
    }
    while (need_factor) {
      skip_ws();
      if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        coef *= parse_rational();
      } else {
        std::size_t start = pos_;
        std::string name = parse_name();
        if (!ctx_->has(name)) fail_at("unknown variable '" + name + "'", start);
        std::size_t v = ctx_->index(name);
        int power = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          ++pos_;
          skip_ws();
          power = parse_int();
        }
        e[v] += power;
      }
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
      } else {
        need_factor = false;
      }
    }
    for (std::size_t i = 0; i < ctx_->size(); ++i)
      if (e[i] < 0 && !ctx_->laurent(i))
        fail("negative exponent on non-Laurent variable '" + ctx_->name(i) + "'");
    out.add_term(e, coef);
  }

  Rational parse_rational() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (!at_end() && peek() == '/') {
      ++pos_;
      std::size_t den_start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (den_start == pos_) fail("missing denominator");
    }
    std::string lit(s_.substr(start, pos_ - start));
    Rational q;
    try {
      q = Rational::parse(lit);
    } catch (const Error& err) {
      fail_at(err.what(), start);
    }
    return q;
  }

  int parse_int() {
    bool neg = false;
    if (!at_end() && peek() == '(') {
      ++pos_;
      int v = parse_int();
      skip_ws();
      if (at_end() || peek() != ')') fail("expected ')'");
      ++pos_;
      return v;
    }
    if (!at_end() && (peek() == '-' || peek() == '+')) {
      neg = peek() == '-';
      ++pos_;
    }
    std::size_t start = pos_;
    long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 100000) fail("exponent too large");
      ++pos_;
    }
    if (start == pos_) fail("expected integer exponent");
    return static_cast<int>(neg ? -v : v);
  }

  std::string parse_name() {
    std::size_t start = pos_;
    if (at_end() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      fail("expected variable name or coefficient");
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < s_.size(); ++i) {
      if (s_[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw ParseError(msg + " in '" + std::string(s_) + "'", line, col);
  }

  std::string_view s_;
  CtxPtr ctx_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly parse_poly(std::string_view text, const CtxPtr& ctx) {
  return detail::PolyParser(text, ctx).parse();
}

inline std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  const VarCtx& ctx = *p.ctx();
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    const bool neg = c.sign() < 0;
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    Rational mag = neg ? -c : c;
    std::string mono;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ctx.name(i);
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) out += mag.str();
    else if (mag.is_one()) out += mono;
    else out += mag.str() + "*" + mono;
  }
  return out;
}

// Tower-coefficient polynomials are serialized by flattening the generators
// into extra (non-Laurent) variables appended to the context.

inline TowerPtr coefficient_ring(const TPoly& p) {
  TowerPtr ring;
  for (const auto& [e, c] : p.terms()) ring = Tower::join(ring, c.ring());
  return ring;
}

inline CtxPtr flattened_ctx(const CtxPtr& ctx, const TowerPtr& ring) {
  std::vector<VarSpec> specs = ctx->vars();
  if (ring)
    for (const auto& l : ring->levels()) specs.push_back({l.name, false});
  return std::make_shared<const VarCtx>(std::move(specs));
}

inline Poly flatten(const TPoly& p, const TowerPtr& ring) {
  CtxPtr fctx = flattened_ctx(p.ctx(), ring);
  const std::size_t base = p.ctx()->size();
  Poly r(fctx);
  for (const auto& [e, c] : p.terms()) {
    for (const auto& [g, q] : c.terms()) {
      Exponents ne = e;
      if (ring) {
        for (std::size_t l = 0; l < ring->height(); ++l) ne[base + l] = g[l];
      } else if (g[0] != 0 || g[1] != 0) {
        throw Error("flattening a tower element without its ring");
      }
      r.add_term(ne, q);
    }
  }
  return r;
}

inline TPoly unflatten(const Poly& flat, const CtxPtr& ctx, const TowerPtr& ring) {
  const std::size_t base = ctx->size();
  TPoly r(ctx);
  for (const auto& [e, q] : flat.terms()) {
    Exponents ne = zero_exponents();
    for (std::size_t i = 0; i < base; ++i) ne[i] = e[i];
    GenExps g{0, 0};
    if (ring)
      for (std::size_t l = 0; l < ring->height(); ++l) g[l] = e[base + l];
    r.add_term(ne, TowerElem(ring, GenTerms{{g, q}}));
  }
  return r;
}

inline std::string to_string(const TPoly& p) {
  TowerPtr ring = coefficient_ring(p);
  return to_string(flatten(p, ring));
}

inline TPoly parse_tpoly(std::string_view text, const CtxPtr& ctx, const TowerPtr& ring) {
  return unflatten(parse_poly(text, flattened_ctx(ctx, ring)), ctx, ring);
}

}  // namespace cylcert
