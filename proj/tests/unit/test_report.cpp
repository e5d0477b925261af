#include <gtest/gtest.h>

#include <string>

#include "cylcert/scenario.hpp"
#include "gen.hpp"
#include "printers.hpp"

using namespace cylcert;

namespace {

Scenario sc(const std::string& id, const std::string& kind, Json params) { return Scenario{id, kind, std::move(params)}; }

Json doc_of(const VerificationReport& r) { return report_document({r}, 0); }

Certificate simple(const std::string& a, const std::string& b) {
  auto c = make_ctx({"x", "y"});
  return cert::make("square", c,
                    {cert::term<Rational>(1, {parse_poly(a, c), parse_poly(a, c)}), cert::term<Rational>(-1, {parse_poly(b, c)})});
}

}  // namespace

TEST(Certificate, ExpansionDecidesIdentity) {
  EXPECT_TRUE(check_certificate(simple("x + y", "x^2 + 2*x*y + y^2"), {}).pass);
  auto bad = check_certificate(simple("x + y", "x^2 + 3*x*y + y^2"), {});
  EXPECT_FALSE(bad.pass);
  EXPECT_NE(bad.message.find("square"), std::string::npos);
  EXPECT_NE(bad.message.find("-x*y"), std::string::npos);
}

TEST(Certificate, ModAndNonzeroAndReduced) {
  auto c = make_ctx({"x", "z"});
  Certificate k = cert::make("trunc", c, {cert::term<Rational>(1, {parse_poly("1 + x + x^3", c)}), cert::term<Rational>(-1, {parse_poly("1 + x", c)})});
  EXPECT_FALSE(check_certificate(k, {}).pass);
  k.mod = std::make_pair(std::string("x"), 3);
  EXPECT_TRUE(check_certificate(k, {}).pass);
  k.nonzero = {"x^3"};
  EXPECT_FALSE(check_certificate(k, {}).pass);
  k.nonzero = {"z^2 + x"};
  EXPECT_TRUE(check_certificate(k, {}).pass);
  k.reduced = std::make_pair(std::string("z"), 2);
  EXPECT_FALSE(check_certificate(k, {}).pass);
  k.nonzero = {"z + x"};
  EXPECT_TRUE(check_certificate(k, {}).pass);
}

TEST(Certificate, MapsChainThroughTable) {
  auto a = make_ctx({"u"}), b = make_ctx({"x", "y"});
  HomTable homs;
  homs["h"] = CertHom{a, b, {"x + y"}};
  Certificate k = cert::make("pull", b, {CertTerm{{"u^2"}, {"h"}}, cert::term<Rational>(-1, {parse_poly("x^2 + 2*x*y + y^2", b)})});
  EXPECT_TRUE(check_certificate(k, homs).pass);
  EXPECT_FALSE(check_certificate(k, {}).pass);
  homs["h"].images = {"x - y"};
  EXPECT_FALSE(check_certificate(k, homs).pass);
  k.terms[0].maps = {"h", "h"};
  EXPECT_FALSE(check_certificate(k, homs).pass);  // target of h is not its source
}

TEST(Certificate, JsonRoundTripAndTower) {
  auto ring = Tower::rationals()->adjoin_root("c", 3, TowerElem(Rational(1, 4)));
  auto ctx = make_ctx({"x"});
  TPoly g = TPoly::constant(ctx, ring->gen(0));
  Certificate k = cert::make("cube", ctx, {cert::term<TowerElem>(1, {g, g, g}), cert::term<TowerElem>(-1, {TPoly::constant(ctx, TowerElem(Rational(1, 4)))})}, ring);
  ASSERT_EQ(k.tower.size(), 1u);
  EXPECT_EQ(k.tower[0].value, "1/4");
  Certificate back = certificate_from_json(Json::parse(to_json(k).dump()));
  EXPECT_EQ(to_json(back), to_json(k));
  EXPECT_TRUE(check_certificate(back, {}).pass);
  back.tower[0].value = "1/2";
  EXPECT_FALSE(check_certificate(back, {}).pass);
}

TEST(Manifest, EmptyAndMalformed) {
  EXPECT_TRUE(parse_manifest(R"({"scenarios": []})").empty());
  EXPECT_TRUE(run_manifest({}, RunOptions{}).empty());
  try {
    parse_manifest("{\n  \"scenarios\": [\n    {\"id\": \"a\",, }\n  ]\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 16u);  // the second comma
  }
  EXPECT_THROW(parse_manifest(R"({"scenarios": [{"id": "a", "kind": "classify"}, {"id": "a", "kind": "classify"}]})"), ScenarioError);
  EXPECT_THROW(parse_manifest(R"({"scenarios": [{"id": "a", "kind": "nope"}]})"), ScenarioError);
  EXPECT_THROW(parse_manifest(R"([1, 2])"), ScenarioError);
}

TEST(Manifest, MalformedPolynomialNamesScenario) {
  auto s = sc("bad-poly", "classify", Json{{"n", 4}, {"p1", "1+*x"}, {"p2", "1"}});
  try {
    run_scenario(s, RunOptions{});
    FAIL() << "expected a scenario error";
  } catch (const ScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("bad-poly"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("p1"), std::string::npos);
  }
  EXPECT_THROW(run_scenario(sc("y", "classify", Json{{"n", 4}, {"p1", "1+y"}, {"p2", "1"}}), RunOptions{}), ScenarioError);
  EXPECT_THROW(run_scenario(sc("m", "classify", Json{{"p1", "1"}, {"p2", "1"}}), RunOptions{}), ScenarioError);
  EXPECT_THROW(run_scenario(sc("t", "classify", Json{{"n", "4"}, {"p1", "1"}, {"p2", "1"}}), RunOptions{}), ScenarioError);
}

TEST(Scenarios, ClassifyVerdictsAndCaveat) {
  auto iso = run_scenario(sc("i", "classify", Json{{"n", 4}, {"p1", "1+x"}, {"p2", "3+6*x"}, {"expect", "iso"}}), {});
  EXPECT_EQ(iso.verdict, Verdict::Pass);
  EXPECT_EQ(iso.summary["lambda"], "2");
  EXPECT_TRUE(iso.caveats.empty());
  EXPECT_TRUE(recheck_report(doc_of(iso)).pass);

  auto ni = run_scenario(sc("n", "classify", Json{{"n", 4}, {"p1", "1+x+a*x^2"}, {"p2", "1+x+2*x^2"}, {"subs", {{"a", 3}}}}), {});
  EXPECT_EQ(ni.verdict, Verdict::Pass);
  EXPECT_EQ(ni.summary["classification"], "not_iso");
  ASSERT_EQ(ni.caveats.size(), 1u);
  bool has_power = false;
  for (const auto& c : ni.certificates) has_power = has_power || c.name.rfind("power_mismatch", 0) == 0;
  EXPECT_TRUE(has_power);
  EXPECT_TRUE(recheck_report(doc_of(ni)).pass);

  auto wrong = run_scenario(sc("w", "classify", Json{{"n", 4}, {"p1", "1+x"}, {"p2", "1+x+x^2"}, {"expect", "iso"}}), {});
  EXPECT_EQ(wrong.verdict, Verdict::Fail);

  auto support = run_scenario(sc("s", "classify", Json{{"n", 4}, {"p1", "1+x"}, {"p2", "1+x^2"}}), {});
  EXPECT_EQ(support.summary["classification"], "not_iso");
  EXPECT_EQ(support.verdict, Verdict::Pass);
  EXPECT_TRUE(recheck_report(doc_of(support)).pass);
}

TEST(Scenarios, IrrationalWitnessCarriesTower) {
  // The only scalar equation is lambda^2 = 2.
  auto r = run_scenario(sc("t", "classify", Json{{"n", 4}, {"p1", "1+x^2"}, {"p2", "1+2*x^2"}}), {});
  ASSERT_EQ(r.verdict, Verdict::Pass);
  bool tower = false;
  for (const auto& c : r.certificates) tower = tower || !c.tower.empty();
  EXPECT_TRUE(tower);
  EXPECT_TRUE(recheck_report(doc_of(r)).pass);
}

TEST(Scenarios, EquCritSeedsAndExpectations) {
  Json p{{"n", 4}, {"p1", "1+x+x^2"}, {"seed", 7}};
  auto a = run_scenario(sc("e", "equ-crit", p), {});
  auto b = run_scenario(sc("e", "equ-crit", p), {});
  EXPECT_EQ(a.verdict, Verdict::Pass);
  EXPECT_EQ(dump_canonical(to_json(a)), dump_canonical(to_json(b)));
  EXPECT_EQ(a.seed, 7u);
  p["seed"] = 8;
  auto c = run_scenario(sc("e", "equ-crit", p), {});
  EXPECT_NE(a.homs.at("phi").images, c.homs.at("phi").images);

  auto d = run_scenario(sc("d", "equ-crit", Json{{"n", 4}, {"p1", "1+x"}, {"p2", "1+x+x^2"}, {"seed", 3}}), {});
  EXPECT_EQ(d.verdict, Verdict::Pass);
  EXPECT_EQ(d.summary["outcome"], "precondition_failed");
  EXPECT_TRUE(recheck_report(doc_of(d)).pass);
  auto e = run_scenario(sc("d", "equ-crit", Json{{"n", 4}, {"p1", "1+x"}, {"p2", "1+x+x^2"}, {"expect", "equal"}}), {});
  EXPECT_EQ(e.verdict, Verdict::Fail);
}

TEST(Scenarios, JetOrderFromOptions) {
  RunOptions opt;
  opt.jet_order = 6;
  auto r = run_scenario(sc("j", "analytic-jet", Json{{"n", 4}, {"p", "1+x+x^2"}}), opt);
  EXPECT_EQ(r.summary["N"], 6);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  auto raw = run_scenario(sc("j", "analytic-jet", Json{{"n", 3}, {"p", "1+x"}, {"y_correction", false}}), opt);
  EXPECT_EQ(raw.verdict, Verdict::Fail);
  auto err = run_scenario(sc("j", "analytic-jet", Json{{"n", 3}, {"p", "2+x"}}), opt);
  EXPECT_EQ(err.verdict, Verdict::Fail);
  EXPECT_TRUE(err.summary.contains("error"));
}

TEST(Scenarios, Section2FilterAndControl) {
  auto one = run_scenario(sc("s", "section2", Json{{"check", "gl2_det"}}), {});
  EXPECT_EQ(one.verdict, Verdict::Pass);
  EXPECT_EQ(one.summary["checks"].size(), 1u);
  EXPECT_THROW(run_scenario(sc("s", "section2", Json{{"check", "nope"}}), {}), ScenarioError);
  auto ctrl = run_scenario(sc("c", "section2", Json{{"alpha", "-2"}, {"check", "gl2_ideal"}}), {});
  EXPECT_EQ(ctrl.verdict, Verdict::Fail);
  auto expected = run_scenario(sc("c", "section2", Json{{"alpha", "-2"}, {"check", "gl2_ideal"}, {"expect_fail", {"gl2_ideal"}}}), {});
  EXPECT_EQ(expected.verdict, Verdict::Pass);
  EXPECT_TRUE(recheck_report(doc_of(expected)).pass);
}

TEST(Recheck, PassWithoutCertificatesFails) {
  VerificationReport r;
  r.id = "empty";
  r.kind = "classify";
  r.verdict = Verdict::Pass;
  EXPECT_FALSE(recheck_report(doc_of(r)).pass);
  r.verdict = Verdict::Fail;
  EXPECT_TRUE(recheck_report(doc_of(r)).pass);
}

TEST(Recheck, TamperedCenterFailsAndIsIdempotent) {
  auto r = run_scenario(sc("c", "center-iso", Json{{"n", 2}, {"p", "4"}}), {});
  ASSERT_EQ(r.verdict, Verdict::Pass);
  Json doc = doc_of(r);
  auto first = recheck_report(doc), second = recheck_report(doc);
  EXPECT_TRUE(first.pass);
  ASSERT_EQ(first.lines.size(), second.lines.size());
  for (std::size_t i = 0; i < first.lines.size(); ++i) EXPECT_EQ(first.lines[i].outcome.message, second.lines[i].outcome.message);
  auto& imgs = doc["reports"][0]["maps"]["xi"]["images"];
  std::string t = imgs[2].get<std::string>();
  imgs[2] = "2*" + t;
  auto bad = recheck_report(doc);
  EXPECT_FALSE(bad.pass);
  bool named = false;
  for (const auto& l : bad.lines) named = named || (!l.outcome.pass && l.outcome.message.rfind("center", 0) == 0);
  EXPECT_TRUE(named);
}

TEST(Recheck, ParallelRunMatchesSerial) {
  std::vector<Scenario> s{sc("a", "classify", Json{{"n", 4}, {"p1", "1+x"}, {"p2", "1+x"}}),
                          sc("b", "center-iso", Json{{"n", 3}, {"p", "1+x"}}),
                          sc("c", "equ-crit", Json{{"n", 3}, {"p1", "1+x"}}),
                          sc("d", "analytic-jet", Json{{"n", 2}, {"p", "1+x"}})};
  RunOptions opt{99, std::nullopt, false};
  EXPECT_EQ(dump_canonical(report_document(run_manifest(s, opt, 3), 99)),
            dump_canonical(report_document(run_manifest(s, opt, 1), 99)));
}
