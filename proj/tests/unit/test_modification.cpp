#include <gtest/gtest.h>

#include "cylcert/modification.hpp"
#include "cylcert/poly_io.hpp"
#include "gen.hpp"
#include "printers.hpp"

using namespace cylcert;

namespace {

CtxPtr amb() { return make_ctx({"x", "y", "z", "t"}); }
Poly P(const std::string& s, const CtxPtr& c) { return parse_poly(s, c); }
IdealXN<Rational> I(int n, const std::string& F, const CtxPtr& c) {
  return IdealXN<Rational>(c->index("x"), n, P(F, c), c->index("z"));
}

}  // namespace

TEST(IdealMember, Examples) {
  auto c = amb();
  auto I4 = I(4, "z^2 + t^3 + x", c);
  Poly pF = P("1 + 2*x + 3*x^3", c) * I4.F;
  auto a = ideal_member(pF, I4);
  ASSERT_TRUE(a.member);
  EXPECT_TRUE(a.reconstructs(pF, I4));
  auto b = ideal_member(P("x^4", c), I4);
  ASSERT_TRUE(b.member);
  EXPECT_EQ(b.Q, P("1", c));
  EXPECT_TRUE(b.u.is_zero());
  auto d = ideal_member(P("z", c), I(2, "z^2 + t^3 + x", c));
  EXPECT_FALSE(d.member);
  EXPECT_EQ(d.remainder, P("z", c));
}

TEST(IdealMember, RejectsNonMonicCenter) {
  auto c = amb();
  EXPECT_THROW(IdealXN<Rational>(0, 3, P("x*z^2 + t", c), 2), NotUnitError);
  EXPECT_NO_THROW(IdealXN<Rational>(0, 3, P("1 + x", c) * P("z^2", c) + P("t", c), 2));
}

TEST(IdealEqual, Examples) {
  auto c = amb();
  auto base = I(4, "z^2 + t^3 + x", c);
  IdealXN<Rational> scaled(0, 4, P("1 + x", c) * base.F, 2);
  EXPECT_TRUE(ideal_equal(base, scaled).equal);
  EXPECT_TRUE(ideal_equal(base, base).equal);
  auto r = ideal_equal(I(3, "z^2 + t^3 + x", c), I(3, "z^2 + t^3 + x + x^2", c));
  EXPECT_FALSE(r.equal);
  EXPECT_EQ(r.second_in_first.remainder, P("x^2", c));
}

TEST(SubringRescale, Examples) {
  auto c = make_ctx({"x"});
  auto a = subring_rescale_equal(2, P("1", c), 0);
  EXPECT_EQ(a.cofactors[0], P("1", c));
  EXPECT_TRUE(a.cofactors[1].is_zero());
  auto b = subring_rescale_equal(2, P("1 + x", c), 0);
  EXPECT_EQ(b.cofactors[0], P("1 - x", c));
  EXPECT_EQ(b.cofactors[1], P("1", c));
  EXPECT_TRUE(b.verify());
  auto d = subring_rescale_equal(3, P("2", c), 0);
  EXPECT_EQ(d.cofactors[0], P("1/2", c));
  EXPECT_TRUE(d.cofactors[1].is_zero());
  EXPECT_THROW(subring_rescale_equal(2, P("x", c), 0), Error);
}

TEST(VerifyVarietyMap, Examples) {
  auto c = amb();
  VarietyEq<Rational> X0("X0", P("x^4*z - y^2 - x - x^2 + t^3", c));
  VarietyEq<Rational> X("X", P("x^4*y + z^2 + t^3 + x + x^2", c));
  RingHom<Rational> h(c, c, {P("x", c), P("z", c), P("-y", c), P("-t", c)});
  auto r = verify_variety_map(h, X, X0);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.cofactor, P("-1", c));
  EXPECT_TRUE(r.unit_cofactor);
  VarietyEq<Rational> V("V21", P("x^2*y + z^2 + t^3 + x", c));
  auto id = verify_variety_map(RingHom<Rational>::identity(c), V, V);
  EXPECT_TRUE(id.pass);
  EXPECT_EQ(id.cofactor, P("1", c));
  auto shift = RingHom<Rational>::substitution(c, {{"z", P("z + 1", c)}});
  auto f = verify_variety_map(shift, V, V);
  EXPECT_FALSE(f.pass);
  EXPECT_EQ(f.remainder, P("2*z + 1", c));
}

TEST(VerifyIsomorphism, SwapIsInvertible) {
  auto c = amb();
  VarietyEq<Rational> X0("X0", P("x^4*z - y^2 - x - x^2 + t^3", c));
  VarietyEq<Rational> X("X", P("x^4*y + z^2 + t^3 + x + x^2", c));
  RingHom<Rational> h(c, c, {P("x", c), P("z", c), P("-y", c), P("-t", c)});
  RingHom<Rational> hinv(c, c, {P("x", c), P("-z", c), P("y", c), P("-t", c)});
  EXPECT_TRUE(verify_isomorphism(h, hinv, X, X0).pass);
  auto bad = verify_isomorphism(h, h, X, X0);
  EXPECT_FALSE(bad.pass);
}

TEST(LiftModification, Examples) {
  auto c = amb();
  auto Isrc = I(2, "z^2 + t^3 + 64*x", c);
  auto Itgt = I(2, "z^2 + t^3 + x", c);
  RingHom<Rational> phi(c, c, {P("x", c), P("y", c), P("1/8*z", c), P("1/4*t", c)});
  auto lift = lift_modification_auto(phi, Isrc, Itgt, 1, 1);
  EXPECT_EQ(lift.hom.image("y"), P("1/64*y", c));
  EXPECT_EQ(lift.check.cofactor, P("1/64", c));
  auto same = lift_modification_auto(RingHom<Rational>::identity(c), Itgt, Itgt, 1, 1);
  EXPECT_EQ(same.hom.image("y"), P("y", c));
  EXPECT_THROW(lift_modification_auto(RingHom<Rational>::identity(c), I(2, "z^2 + t^3 + x + z*x", c), Itgt, 1, 1),
               VerificationError);
}

TEST(LiftModification, InverseRoundTrip) {
  auto c = amb();
  auto Isrc = I(3, "z^2 + t^3 + x", c);
  IdealXN<Rational> Itgt(0, 3, P("1 + x", c) * P("z^2 + t^3 + x", c), 2);
  auto fwd = lift_modification_auto(RingHom<Rational>::identity(c), Isrc, Itgt, 1, 1);
  auto bwd = lift_modification_auto(RingHom<Rational>::identity(c), Itgt, Isrc, 1, 1);
  VarietyEq<Rational> Vs("src", P("x^3*y", c) + Isrc.F), Vt("tgt", P("x^3*y", c) + Itgt.F);
  auto iso = verify_isomorphism(fwd.hom, bwd.hom, Vs, Vt);
  EXPECT_TRUE(iso.forward.pass);
  EXPECT_TRUE(iso.backward.pass);
  EXPECT_TRUE(iso.failed_round_trips.empty());
}

TEST(ModificationProperties, UnitMultiplesGenerateSameIdeal) {
  auto c = amb();
  testgen::Gen g(606);
  for (int i = 0; i < 30; ++i) {
    int n = static_cast<int>(g.integer(1, 5));
    Poly F = P("z^2 + t^3", c) + P("x", c) * g.poly(c, 3, 2).truncated(2, 1).truncated(1, 1);
    Poly u = Poly::constant(c, g.nonzero_rational()) + P("x", c) * g.poly(c, 3, 2).truncated(1, 1).truncated(2, 1);
    IdealXN<Rational> A(0, n, F, 2), B(0, n, u * F, 2);
    auto eq = ideal_equal(A, B);
    EXPECT_TRUE(eq.equal);
    EXPECT_TRUE(eq.second_in_first.reconstructs(B.F, A));
    EXPECT_TRUE(eq.first_in_second.reconstructs(A.F, B));
  }
}

TEST(ModificationProperties, EquivalenceRelation) {
  auto c = amb();
  testgen::Gen g(17);
  for (int i = 0; i < 20; ++i) {
    int n = static_cast<int>(g.integer(1, 4));
    Poly F = P("z^2 + t^3 + x", c) + P("x^2", c) * g.poly(c, 2, 2).truncated(2, 1).truncated(1, 1);
    Poly u1 = P("1", c) + P("x", c) * g.poly(c, 2, 2).truncated(1, 1).truncated(2, 1);
    Poly u2 = P("2", c) + P("x", c) * g.poly(c, 2, 2).truncated(1, 1).truncated(2, 1);
    Poly other = F + P("x", c) * Poly::constant(c, g.nonzero_rational()) * P("z", c);
    IdealXN<Rational> A(0, n, F, 2), B(0, n, u1 * F, 2), Cc(0, n, u2 * F, 2), D(0, n, other, 2);
    EXPECT_TRUE(ideal_equal(A, A).equal);
    EXPECT_EQ(ideal_equal(A, B).equal, ideal_equal(B, A).equal);
    EXPECT_TRUE(ideal_equal(A, B).equal && ideal_equal(B, Cc).equal && ideal_equal(A, Cc).equal);
    EXPECT_EQ(ideal_equal(A, D).equal, ideal_equal(D, A).equal);
    if (n >= 2) {
      EXPECT_FALSE(ideal_equal(A, D).equal);
    }
  }
}
