#include <gtest/gtest.h>

#include "cylcert/linbez.hpp"
#include "cylcert/poly_io.hpp"
#include "gen.hpp"
#include "printers.hpp"
#include "oracles.hpp"

using namespace cylcert;

namespace {

CtxPtr cx() { return make_ctx({"x"}); }
Poly P(const std::string& s, const CtxPtr& c) { return parse_poly(s, c); }

std::vector<Rational> dense(const Poly& p) {
  std::vector<Rational> out(static_cast<std::size_t>(p.degree(0) + 1), Rational(0));
  for (const auto& [e, c] : p.terms()) out[static_cast<std::size_t>(e[0])] = c;
  return out;
}

}  // namespace

TEST(ExtGcd, Examples) {
  auto c = cx();
  auto r = ext_gcd(P("1 + x", c), P("1 - x", c), 0);
  EXPECT_EQ(r.g, P("1", c));
  EXPECT_EQ(r.s, P("1/2", c));
  EXPECT_EQ(r.t, P("1/2", c));
  auto q = ext_gcd(P("x^4", c), P("3 + x - 2*x^5", c), 0);
  EXPECT_EQ(q.g, P("1", c));
  EXPECT_EQ(q.s * P("x^4", c) + q.t * P("3 + x - 2*x^5", c), P("1", c));
  auto z = ext_gcd(P("2*x^2 + 4", c), P("0", c), 0);
  EXPECT_EQ(z.g, P("x^2 + 2", c));
  EXPECT_EQ(z.s, P("1/2", c));
  EXPECT_TRUE(z.t.is_zero());
  EXPECT_THROW(ext_gcd(P("0", c), P("0", c), 0), DivisionError);
  auto g = ext_gcd(P("x^2 - 1", c), P("x^2 + 2*x + 1", c), 0);
  EXPECT_EQ(g.g, P("x + 1", c));
}

TEST(ExtGcd, RejectsMultivariate) {
  auto c = make_ctx({"x", "lam"}, {"lam"});
  EXPECT_THROW(ext_gcd(P("x + lam", c), P("x", c), 0), ContextError);
}

TEST(BezoutXPow, LaurentCoefficients) {
  auto c = make_ctx({"x", "lam"}, {"lam"});
  Poly sigma2 = P("2*lam^3 - lam^-3*x - lam^-3*x^2 - 1/4*lam^-9*x^2 + x^3", c);
  auto cert = bezout_with_xpow(sigma2, 0, 4);
  EXPECT_TRUE(cert.verify());
  EXPECT_LT(cert.cofactors[1].degree(0), 4);
  EXPECT_THROW(bezout_with_xpow(P("x + x^2", c), 0, 3), NotUnitError);
}

TEST(CompleteUnimodular, Examples) {
  auto c = cx();
  auto a = complete_unimodular(P("1", c), P("1", c), 0, 2);
  EXPECT_TRUE(a.h1.is_zero());
  EXPECT_TRUE(a.h2.is_zero());
  EXPECT_EQ(a.h3, P("1", c));
  auto b = complete_unimodular(P("1 + 1/2*x - 1/8*x^2", c), P("1 + 1/3*x - 1/9*x^2", c), 0, 3);
  EXPECT_EQ(oracle::perm_det(b.matrix, c), P("1", c));
  auto d = complete_unimodular(P("1 + x", c), P("1 - x", c), 0, 2);
  EXPECT_EQ(oracle::perm_det(d.matrix, c), P("1", c));
  Poly lhs = P("1 + x", c) * P("1 - x", c) * d.h3 -
             P("x^2", c) * (P("1 + x", c) * d.h2 + P("1 - x", c) * d.h1);
  EXPECT_EQ(lhs, P("1", c));
  EXPECT_THROW(complete_unimodular(P("1 + x", c), P("1 + 2*x + x^2", c), 0, 2), Error);
  EXPECT_THROW(complete_unimodular(P("2 + x", c), P("1", c), 0, 2), Error);
}

TEST(CoprimeAdjust, Examples) {
  auto c = cx();
  EXPECT_EQ(coprime_adjust(P("1 + x", c), P("1 - x", c), 0, 2), P("1 - x", c));
  EXPECT_EQ(coprime_adjust(P("1 + x", c), P("1 + x", c), 0, 2), P("1 + x + x^2", c));
  EXPECT_EQ(coprime_adjust(P("1 + 2*x + x^2", c), P("1 + x", c), 0, 2), P("1 + x + x^2", c));
}

TEST(Matrix, DetAndInverse) {
  auto c = cx();
  Rational b(-1, 3);
  Poly x2 = P("x^2", c), x4 = P("x^4", c), one = P("1", c);
  Poly off = x4.scaled(b * b / Rational(2));
  PolyMatrix<Rational> gl{{one - x2.scaled(b) + off, off}, {off, one + x2.scaled(b) + off}};
  EXPECT_EQ(det(gl, c), one);
  EXPECT_EQ(oracle::perm_det(gl, c), one);
  auto inv = inverse_unit_det(gl, c);
  EXPECT_EQ(matmul(inv, gl, c), identity_matrix<Rational>(2, c));
  auto id = identity_matrix<Rational>(3, c);
  EXPECT_EQ(det(id, c), one);
  EXPECT_EQ(inverse_unit_det(id, c), id);
  PolyMatrix<Rational> dg{{P("2", c), P("0", c)}, {P("0", c), P("1/2", c)}};
  EXPECT_EQ(det(dg, c), one);
  PolyMatrix<Rational> bad{{P("x", c), P("0", c)}, {P("0", c), P("1", c)}};
  EXPECT_THROW(inverse_unit_det(bad, c), NotUnitError);
}

TEST(LinbezProperties, RandomCompletionsHaveDetOne) {
  auto c = cx();
  testgen::Gen g(314);
  int done = 0;
  while (done < 30) {
    int n = static_cast<int>(g.integer(1, 6));
    Poly g1 = g.univariate(c, 0, static_cast<int>(g.integer(1, 6)), Rational(1));
    Poly g2 = g.univariate(c, 0, static_cast<int>(g.integer(1, 6)), Rational(1));
    bool cop = g1.degree(0) == 0 || g2.degree(0) == 0 ||
               !oracle::sylvester_resultant(dense(g1), dense(g2)).is_zero();
    EXPECT_EQ(cop, coprime(g1, g2, 0));
    if (!cop) continue;
    auto u = complete_unimodular(g1, g2, 0, n);
    EXPECT_EQ(oracle::perm_det(u.matrix, c), P("1", c));
    auto inv = inverse_unit_det(u.matrix, c);
    EXPECT_EQ(matmul(u.matrix, inv, c), identity_matrix<Rational>(3, c));
    EXPECT_EQ(matmul(inv, u.matrix, c), identity_matrix<Rational>(3, c));
    ++done;
  }
}

TEST(LinbezProperties, AdjustedPairsAreCoprime) {
  auto c = cx();
  testgen::Gen g(2718);
  for (int i = 0; i < 30; ++i) {
    int n = static_cast<int>(g.integer(1, 5));
    Poly f = g.univariate(c, 0, 3, Rational(1));
    Poly g1 = f * g.univariate(c, 0, 3, Rational(1));
    Poly g20 = f;
    Poly g2 = coprime_adjust(g1, g20, 0, n);
    EXPECT_EQ((g2 - g20).truncated(0, n), P("0", c));
    EXPECT_TRUE(oracle::sylvester_resultant(dense(g1), dense(g2)) != Rational(0) || g1.degree(0) == 0);
  }
}
