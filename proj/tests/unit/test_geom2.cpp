#include <gtest/gtest.h>

#include "cylcert/geom2.hpp"
#include "gen.hpp"
#include "printers.hpp"

using namespace cylcert;

namespace {

const NamedCheck& find(const std::vector<NamedCheck>& v, const std::string& name) {
  for (const auto& c : v)
    if (c.name == name) return c;
  throw std::runtime_error("missing check " + name);
}

std::string datum(const NamedCheck& c, const std::string& key) {
  for (const auto& [k, v] : c.data)
    if (k == key) return v;
  return "";
}

Poly S(const std::string& s) { return parse_poly(s, s2_chart_ctx()); }

}  // namespace

TEST(Section2, Gallery) {
  auto g = variety_gallery();
  EXPECT_EQ(g.size(), 6u);
  EXPECT_EQ(gallery_entry(g, "X0").eq, parse_poly("x^4*y + z^2 + t^3 + x + x^2", xyzt_ctx()));
  EXPECT_EQ(gallery_entry(g, "V_lambda").eq, parse_poly("x^4*z - y^2 + lam^6 - x - x^2", s2_lambda_ctx()));
}

TEST(Section2, SigmaXiTauZeta) {
  auto d = build_section2_data(Rational(-5, 3));
  EXPECT_EQ(d.sigma.coeff_in(0, 1), S("-1/2*lam^(-3)"));
  EXPECT_EQ(d.sigma.coeff_in(0, 0), S("lam^3"));
  EXPECT_LE(d.sigma.degree(0), 3);
  EXPECT_EQ(d.tau - d.sigma, S("5/6*x^2") * d.sigma);
  EXPECT_EQ(S("x^4") * d.zeta - S("1 - 5/3*x^2") * d.tau * d.tau + S("lam^6 - x - x^2"), Poly(s2_chart_ctx()));
  EXPECT_EQ(flip_lambda(d.sigma), -d.sigma);
  EXPECT_EQ(flip_lambda(d.xi), d.xi);
  for (const auto& c : section2_data_checks(d)) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Section2, SigmaSquareOracle) {
  // sigma^2 against lam^6 - x - x^2 coefficientwise up to x^3
  auto d = build_sigma_xi();
  Poly sq = (d.sigma * d.sigma).truncated(0, 4);
  EXPECT_EQ(sq, S("lam^6 - x - x^2"));
  // hand expansion: sigma = l^3 - x/(2 l^3) - x^2 (1/(2 l^3) + 1/(8 l^9)) + ...
  EXPECT_EQ(d.sigma.coeff_in(0, 2), S("-1/2*lam^(-3) - 1/8*lam^(-9)"));
}

TEST(Section2, CoordinateChanges) {
  auto cc = coordinate_change_checks({});
  for (const auto& c : cc) EXPECT_TRUE(c.pass) << c.name << " " << datum(c, "error");
  EXPECT_EQ(datum(find(cc, "x0_to_x"), "cofactor"), "-1");
  EXPECT_EQ(datum(find(cc, "gl2_det"), "det"), "1");
  EXPECT_EQ(parse_poly(datum(find(cc, "gl2_ideal"), "cofactor"), xyzt_ctx()), parse_poly("1 - x^2", xyzt_ctx()));
}

TEST(Section2, GL2ImageReducesWithCofactor) {
  const auto& c = xyzt_ctx();
  auto m = gl2_matrix(Rational(-1, 3));
  Poly image = gl2_hom(m).apply(parse_poly("z^2 - 5/3*x^2*z^2 + x + x^2 + t^3", c));
  Poly target = parse_poly("1 - x^2", c) * parse_poly("z^2 + t^3 + x + x^2 + x^3", c);
  EXPECT_EQ((image - target).truncated(0, 4), Poly(c));
}

TEST(Section2, X1ToYIsomorphism) {
  auto iso = build_x1_y_iso({});
  EXPECT_TRUE(iso.check.pass);
  EXPECT_TRUE(iso.check.failed_round_trips.empty());
  EXPECT_EQ(iso.lift.membership.u, parse_poly("1 - x^2", xyzt_ctx()));
}

TEST(Section2, Trivializations) {
  auto d = build_section2_data(Rational(-5, 3));
  for (const auto& ch : section2_charts(d)) {
    auto r = trivialization_check(ch);
    EXPECT_TRUE(r.residual.is_zero()) << ch.name << ": " << to_string(r.residual);
    EXPECT_TRUE(r.equivariant) << ch.name;
  }
  auto vx = section2_charts(d)[0];
  const auto& u = s2_ux_ctx();
  // flow of x^4 d/dy + 2 y d/dz shifts y by x^4 s and z by 2 y s + x^4 s^2
  auto shifted = RingHom<Rational>::substitution(u, {{"v", parse_poly("v + s", u)}});
  EXPECT_EQ(shifted.apply(vx.map.image("y")) - vx.map.image("y"), parse_poly("x^4*s", u));
  EXPECT_EQ(shifted.apply(vx.map.image("z")) - vx.map.image("z"),
            parse_poly("2*s", u) * vx.map.image("y") + parse_poly("x^4*s^2", u));
  for (const auto& c : trivialization_checks(d)) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Section2, WtChartNeedsFactor) {
  auto d = build_section2_data(Rational(-5, 3));
  auto bare = section2_charts(d, false).back();
  auto r = trivialization_check(bare);
  const auto& c = s2_chart_ctx();
  Poly v = Poly::var(c, "v");
  EXPECT_EQ(r.residual, parse_poly("5/3*x^6", c) * (parse_poly("x^4", c) * v + d.tau + d.tau) * v);
  EXPECT_TRUE(find(trivialization_checks(d), "chart_W_t_without_factor").pass);
}

TEST(Section2, FiberProduct) {
  auto d = build_section2_data(Rational(-5, 3));
  for (const auto& c : fiberproduct_identities(d)) EXPECT_TRUE(c.pass) << c.name << " " << datum(c, "error");
}

TEST(Section2, Coboundaries) {
  auto d = build_section2_data(Rational(-5, 3));
  for (const auto& c : coboundary_checks(d)) EXPECT_TRUE(c.pass) << c.name << " " << datum(c, "error");
  auto xs = solve_coboundary(d, BundleSide::X);
  ASSERT_TRUE(xs);
  EXPECT_EQ(xs->beta_x, parse_poly("-v - 5/6*x^2*v", s2_cech_ctx()));
  EXPECT_EQ(xs->beta_l, xs->beta_x);
  auto ys = solve_coboundary(d, BundleSide::Y);
  ASSERT_TRUE(ys);
  EXPECT_EQ(ys->beta_x, parse_poly("-v + 5/6*x^2*v", s2_cech_ctx()));
}

TEST(Section2, SuitePassesAndIsIdempotent) {
  auto a = section2_suite();
  EXPECT_TRUE(a.pass);
  for (const auto& c : a.checks) EXPECT_TRUE(c.pass) << c.name << " " << datum(c, "error");
  auto b = section2_suite();
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].name, b.checks[i].name);
    EXPECT_EQ(a.checks[i].data, b.checks[i].data);
  }
}

TEST(Section2, AlphaMinusTwoNegativeControl) {
  auto r = section2_suite({Rational(-2), Rational(-1, 3)});
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(find(r.checks, "gl2_ideal").pass);
  EXPECT_FALSE(find(r.checks, "x1_to_y").pass);
  // The scalar identity behind tau holds for every alpha.
  EXPECT_TRUE(find(r.checks, "scalar_identity").pass);
  EXPECT_TRUE(find(r.checks, "zeta_identity").pass);
}

TEST(Section2, ParityAndCoboundaryForRandomAlpha) {
  testgen::Gen g(2024);
  for (int i = 0; i < 5; ++i) {
    Rational alpha = g.nonzero_rational();
    auto d = build_section2_data(alpha);
    EXPECT_EQ(flip_lambda(d.tau), -d.tau);
    EXPECT_EQ(flip_lambda(d.zeta), d.zeta);
    EXPECT_TRUE(solve_coboundary(d, BundleSide::Y).has_value());
  }
}
