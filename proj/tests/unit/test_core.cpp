#include <gtest/gtest.h>

#include "cylcert/division.hpp"
#include "cylcert/poly_io.hpp"
#include "cylcert/ringhom.hpp"
#include "gen.hpp"
#include "printers.hpp"
#include "oracles.hpp"

using namespace cylcert;

namespace {

CtxPtr xyzt() { return make_ctx({"x", "y", "z", "t"}); }
Poly P(const std::string& s, const CtxPtr& c) { return parse_poly(s, c); }

}  // namespace

TEST(Rational, CanonicalForm) {
  Rational q(6, -4);
  EXPECT_EQ(q.str(), "-3/2");
  EXPECT_EQ(Rational(0, 7).str(), "0");
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_THROW(Rational(1, 0), Error);
  EXPECT_THROW(Rational(0).inverse(), NotUnitError);
}

TEST(Rational, Roots) {
  EXPECT_EQ(Rational(8, 27).root(3), Rational(2, 3));
  EXPECT_FALSE(Rational(2).root(2).has_value());
  EXPECT_EQ(Rational(-8).root(3), Rational(-2));
}

TEST(Parse, RoundTripCanonical) {
  auto c = xyzt();
  Poly p = P("x^4*z - y^2 - x - x^2 + t^3", c);
  EXPECT_EQ(to_string(p), "x^4*z - x^2 - x - y^2 + t^3");
  EXPECT_EQ(parse_poly(to_string(p), c), p);
  EXPECT_EQ(to_string(P("2/4*x - 3", c)), "1/2*x - 3");
  EXPECT_EQ(to_string(P("0", c)), "0");
}

TEST(Parse, RejectsUnknownVariableWithPosition) {
  auto c = xyzt();
  try {
    (void)P("x + 2*w", c);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 7u);
  }
}

TEST(Parse, LaurentExponents) {
  auto c = make_ctx({"x", "lam"}, {"lam"});
  Poly p = P("x*lam^-3 + lam^(-1)", c);
  EXPECT_EQ(p.min_degree(1), -3);
  EXPECT_THROW((void)P("x^-1", c), ParseError);
}

TEST(ApplyHom, CoordinateSwap) {
  auto c = xyzt();
  RingHom<Rational> h(c, c, {P("x", c), P("z", c), P("-y", c), P("-t", c)});
  Poly eq = P("x^4*z - y^2 - x - x^2 + t^3", c);
  EXPECT_EQ(apply_hom(h, eq), -P("x^4*y + z^2 + t^3 + x + x^2", c));
}

TEST(ApplyHom, IdentityAndBinomial) {
  auto c = xyzt();
  testgen::Gen g(11);
  Poly r = g.poly(c, 8);
  EXPECT_EQ(apply_hom(RingHom<Rational>::identity(c), r), r);
  auto h = RingHom<Rational>::substitution(c, {{"z", P("z + 1", c)}});
  EXPECT_EQ(apply_hom(h, P("z^2", c)), P("z^2 + 2*z + 1", c));
}

TEST(ApplyHom, RejectsNonUnitLaurentImage) {
  auto c = make_ctx({"x", "lam"}, {"lam"});
  try {
    RingHom<Rational> h(c, c, {P("x", c), P("lam + 1", c)});
    FAIL();
  } catch (const NotUnitError& e) {
    EXPECT_NE(std::string(e.what()).find("'lam'"), std::string::npos);
  }
  RingHom<Rational> ok(c, c, {P("x", c), P("2*lam^-1", c)});
  EXPECT_EQ(apply_hom(ok, P("lam^-2", c)), P("1/4*lam^2", c));
}

TEST(ComposeHom, SwapSquaredIsSignFlip) {
  auto c = xyzt();
  RingHom<Rational> h(c, c, {P("x", c), P("z", c), P("-y", c), P("-t", c)});
  auto hh = compose_hom(h, h);
  EXPECT_EQ(hh.image("y"), P("-y", c));
  EXPECT_EQ(hh.image("z"), P("-z", c));
  EXPECT_EQ(hh.image("t"), P("t", c));
  testgen::Gen g(5);
  for (int i = 0; i < 10; ++i) {
    Poly q = g.poly(c, 6);
    EXPECT_EQ(apply_hom(hh, q), apply_hom(h, apply_hom(h, q)));
  }
}

TEST(ComposeHom, ScalingsCancelAndContextChecked) {
  auto c = make_ctx({"x", "lam"}, {"lam"});
  auto up = RingHom<Rational>::substitution(c, {{"x", P("lam*x", c)}});
  auto down = RingHom<Rational>::substitution(c, {{"x", P("lam^-1*x", c)}});
  auto id = compose_hom(up, down);
  EXPECT_EQ(id.images(), RingHom<Rational>::identity(c).images());
  auto other = RingHom<Rational>::identity(xyzt());
  EXPECT_THROW(compose_hom(other, up), ContextError);
}

TEST(Jacobian, Examples) {
  auto c = make_ctx({"x", "z", "t"});
  EXPECT_EQ(jacobian_det(RingHom<Rational>::identity(c), {"z", "t"}), Poly::one(c));
  auto h = RingHom<Rational>::substitution(c, {{"z", P("z + 3*x*t^2", c)}, {"t", P("t - 2*x*z", c)}});
  Poly j = jacobian_det(h, {"z", "t"});
  EXPECT_EQ(j, P("1 + 12*x^2*t", c));
  EXPECT_EQ(j.constant_term(), Rational(1));
  // beta = -1/3 GL2 substitution
  Rational b(-1, 3);
  Poly x2 = P("x^2", c), x4 = P("x^4", c);
  Poly a11 = Poly::one(c) - x2.scaled(b) + x4.scaled(b * b / Rational(2));
  Poly a12 = x4.scaled(b * b / Rational(2));
  Poly a22 = Poly::one(c) + x2.scaled(b) + x4.scaled(b * b / Rational(2));
  Poly z = P("z", c), t = P("t", c);
  auto gl = RingHom<Rational>::substitution(c, {{"z", a11 * z + a12 * t}, {"t", a12 * z + a22 * t}});
  EXPECT_EQ(jacobian_det(gl, {"z", "t"}), Poly::one(c));
}

TEST(Division, MonicExamples) {
  auto c = make_ctx({"x", "z", "t"});
  std::size_t z = c->index("z");
  Poly F = P("z^2 + t^3 + x", c);
  auto r = divide_by_monic(P("z^3", c), F, z);
  EXPECT_EQ(r.quotient, P("z", c));
  EXPECT_EQ(r.remainder, P("-z*t^3 - z*x", c));
  auto s = divide_by_monic(F, F, z);
  EXPECT_EQ(s.quotient, Poly::one(c));
  EXPECT_TRUE(s.remainder.is_zero());
  auto u = divide_by_monic(P("x^5", c), F, z);
  EXPECT_TRUE(u.quotient.is_zero());
  EXPECT_EQ(u.remainder, P("x^5", c));
  EXPECT_THROW(divide_by_monic(P("z^3", c), P("x*z^2 + 1", c), z), NotUnitError);
}

TEST(Division, TruncatedLeadingCoefficient) {
  auto c = make_ctx({"x", "z", "t"});
  std::size_t z = c->index("z"), x = c->index("x");
  Poly G = P("z^3 + t", c);
  Poly H = P("z^2 + x*z^2 + t", c);
  auto r = divide_by_monic(G, H, z, TruncSpec{x, 3});
  EXPECT_EQ(r.remainder.degree(z) < 2, true);
  EXPECT_TRUE((G - r.quotient * H - r.remainder).truncated(x, 3).is_zero());
}

TEST(Division, TruncateAndExactShift) {
  auto c = make_ctx({"x", "y"});
  EXPECT_EQ(P("1 + x + x^4", c).truncated(0, 4), P("1 + x", c));
  EXPECT_EQ(P("x^4*y + x^5", c).exact_div_pow(0, 4), P("y + x", c));
  try {
    (void)P("x^4*y + x^2", c).exact_div_pow(0, 4);
    FAIL();
  } catch (const DivisionError& e) {
    EXPECT_NE(std::string(e.what()).find("x-degree 2"), std::string::npos);
  }
}

TEST(Division, ReduceByLaurent) {
  auto c = make_ctx({"x", "lam"}, {"lam"});
  Poly g = P("lam^-2*x + lam", c);
  Poly f = g * P("x^2 - 3*lam^-5", c);
  auto q = divide_exact(f, g);
  ASSERT_TRUE(q.has_value());
  EXPECT_EQ(*q, P("x^2 - 3*lam^-5", c));
  EXPECT_FALSE(divide_exact(f + P("1", c), g).has_value());
}

TEST(Properties, RingLaws) {
  auto c = make_ctx({"x", "lam", "z"}, {"lam"});
  testgen::Gen g(2024);
  for (int i = 0; i < 100; ++i) {
    Poly A = g.poly(c), B = g.poly(c), C = g.poly(c);
    EXPECT_EQ(A * (B + C), A * B + A * C);
    EXPECT_EQ(A * B, B * A);
    EXPECT_EQ((A + B) + C, A + (B + C));
  }
}

TEST(Properties, HomMultiplicative) {
  auto c = make_ctx({"x", "lam", "z"}, {"lam"});
  testgen::Gen g(77);
  for (int i = 0; i < 30; ++i) {
    Poly lam_img = Poly::var(c, 1, static_cast<int>(g.integer(-2, 2))).scaled(g.nonzero_rational());
    RingHom<Rational> h(c, c, {g.poly(c, 3), lam_img, g.poly(c, 3)});
    Poly A = g.poly(c, 4), B = g.poly(c, 4);
    EXPECT_EQ(apply_hom(h, A * B), apply_hom(h, A) * apply_hom(h, B));
    EXPECT_EQ(apply_hom(h, A + B), apply_hom(h, A) + apply_hom(h, B));
  }
}

TEST(Properties, DivisionReconstructs) {
  auto c = make_ctx({"x", "z", "t"});
  testgen::Gen g(99);
  for (int i = 0; i < 50; ++i) {
    int k = static_cast<int>(g.integer(1, 3));
    Poly F = Poly::var(c, 1, k) + g.poly(c, 5, 2).truncated(1, k);
    Poly G = g.poly(c, 6, 4);
    auto r = divide_by_monic(G, F, 1);
    EXPECT_EQ(r.quotient * F + r.remainder, G);
    EXPECT_LT(r.remainder.degree(1), F.degree(1));
  }
}

TEST(Properties, SerializationRoundTrip) {
  auto c = make_ctx({"x", "lam", "z"}, {"lam"});
  testgen::Gen g(3);
  for (int i = 0; i < 100; ++i) {
    Poly p = g.poly(c, 7);
    EXPECT_EQ(parse_poly(to_string(p), c), p);
  }
}
