#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cylcert/scenario.hpp"

namespace {

using namespace cylcert;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::optional<int> jet_order;
  std::string out;
  std::string format = "json";
  bool timings = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw ScenarioError("cannot write '" + g.out + "'");
  f << text;
}

std::string text_report(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& r : reports) {
    passed += r.verdict == Verdict::Pass;
    os << to_string(r.verdict) << "  " << r.id << "  (" << r.kind << ", " << r.certificates.size() << " certificates)";
    if (r.wall_ms) os << "  " << *r.wall_ms << " ms";
    os << "\n";
    if (r.summary.contains("error")) os << "    error: " << r.summary.at("error").get<std::string>() << "\n";
    for (const auto& c : r.caveats) os << "    caveat: " << c << "\n";
  }
  os << passed << "/" << reports.size() << " scenarios pass\n";
  return os.str();
}

int finish(const Globals& g, const std::vector<VerificationReport>& reports) {
  emit(g, g.format == "text" ? text_report(reports) : dump_canonical(report_document(reports, g.seed)));
  for (const auto& r : reports)
    if (r.verdict == Verdict::Fail) return kExitFail;
  return kExitPass;
}

RunOptions options(const Globals& g) { return RunOptions{g.seed, g.jet_order, g.timings}; }

int run_single(const Globals& g, const std::string& kind, const Json& params) {
  Scenario s{kind, kind, params};
  return finish(g, {run_scenario(s, options(g))});
}

int recheck(const Globals& g, const std::string& path) {
  const std::string text = read_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ScenarioError("report '" + path + "' does not parse: " + e.what());
  }
  RecheckResult res;
  try {
    res = recheck_report(doc);
  } catch (const Json::exception& e) {
    throw ScenarioError("report '" + path + "' is malformed: " + e.what());
  }
  std::ostringstream os;
  if (g.format == "json") {
    Json lines = Json::array();
    for (const auto& l : res.lines)
      lines.push_back(Json{{"report", l.report_id}, {"pass", l.outcome.pass}, {"message", l.outcome.message}});
    os << dump_canonical(Json{{"pass", res.pass}, {"certificates", lines}});
  } else {
    for (const auto& l : res.lines) os << (l.outcome.pass ? "ok    " : "FAIL  ") << l.report_id << "  " << l.outcome.message << "\n";
    os << (res.pass ? "recheck: pass" : "recheck: fail") << "\n";
  }
  emit(g, os.str());
  return res.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact certificate engine for the cylinder and classification computations"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed for sampled automorphisms")->capture_default_str();
  app.add_option("--jet-order,--N", g.jet_order, "jet order for analytic-jet (default 16)");
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_option("--format", g.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_flag("--timings", g.timings, "record wall time per scenario (reports are then not byte-stable)");

  std::function<int()> action;

  auto* run = app.add_subcommand("run", "run the scenarios of a manifest");
  std::string manifest, only;
  unsigned jobs = 1;
  run->add_option("--manifest", manifest, "manifest path")->required();
  run->add_option("--scenario", only, "run only this scenario id");
  run->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::Range(1u, 64u));
  run->callback([&] {
    action = [&] {
      auto scenarios = parse_manifest(read_file(manifest));
      if (!only.empty()) {
        std::vector<Scenario> pick;
        for (auto& s : scenarios)
          if (s.id == only) pick.push_back(s);
        if (pick.empty()) throw ScenarioError("no scenario with id '" + only + "'");
        scenarios = std::move(pick);
      }
      return finish(g, run_manifest(scenarios, options(g), jobs));
    };
  });

  auto* cls = app.add_subcommand("classify", "decide whether V_{n,p1} and V_{n,p2} are isomorphic");
  int cn = 4;
  std::string p1, p2, expect;
  cls->add_option("--n", cn)->capture_default_str();
  cls->add_option("--p1", p1)->required();
  cls->add_option("--p2", p2)->required();
  cls->add_option("--expect", expect)->check(CLI::IsMember({"iso", "not_iso"}));
  cls->callback([&] {
    action = [&] {
      Json p{{"n", cn}, {"p1", p1}, {"p2", p2}};
      if (!expect.empty()) p["expect"] = expect;
      return run_single(g, "classify", p);
    };
  });

  // Shared shape: --n, --p with an optional symbol a.
  struct NP {
    int n;
    std::string p;
    std::string a;
  };
  auto add_np = [](CLI::App* sub, NP& v) {
    sub->add_option("--n", v.n)->capture_default_str();
    sub->add_option("--p", v.p)->capture_default_str();
    sub->add_option("--a", v.a, "value substituted for the symbol a in p");
  };
  auto np_json = [](const NP& v) {
    Json p{{"n", v.n}, {"p", v.p}};
    if (!v.a.empty()) p["subs"] = Json{{"a", v.a}};
    return p;
  };

  auto* cyl = app.add_subcommand("cylinder-iso", "V_{n,p} x A1 ~ V_{n,1} x A1, or V_{n,p} x A1 ~ V_{n,p2} x A1");
  NP cyl_v{4, "1+x+a*x^2", "0"};
  std::string cyl_p2;
  add_np(cyl, cyl_v);
  cyl->add_option("--p2", cyl_p2, "second polynomial; compose through p = 1");
  cyl->callback([&] {
    action = [&] {
      Json p = np_json(cyl_v);
      if (!cyl_p2.empty()) p["p2"] = cyl_p2;
      return run_single(g, "cylinder-iso", p);
    };
  });

  auto* jet = app.add_subcommand("analytic-jet", "formal jet check of W_{n,p} -> V_{n,p}");
  NP jet_v{4, "1+x+x^2", ""};
  add_np(jet, jet_v);
  jet->callback([&] { action = [&] { return run_single(g, "analytic-jet", np_json(jet_v)); }; });

  auto* eq = app.add_subcommand("equ-crit", "normalize a sampled automorphism of the center");
  int eq_n = 4, factors = 3;
  std::string eq_p1 = "1+x", eq_p2;
  eq->add_option("--n", eq_n)->capture_default_str();
  eq->add_option("--p1", eq_p1)->capture_default_str();
  eq->add_option("--p2", eq_p2, "defaults to p1");
  eq->add_option("--factors", factors, "exponential factors in the sample")->capture_default_str();
  eq->callback([&] {
    action = [&] {
      Json p{{"n", eq_n}, {"p1", eq_p1}, {"factors", factors}};
      if (!eq_p2.empty()) p["p2"] = eq_p2;
      return run_single(g, "equ-crit", p);
    };
  });

  auto* st = app.add_subcommand("stable-equiv", "V_{n,p} x A1 ~ W_{n,p} x A1 and the threefold classification");
  NP st_v{4, "1+x+x^2", ""};
  add_np(st, st_v);
  st->callback([&] { action = [&] { return run_single(g, "stable-equiv", np_json(st_v)); }; });

  auto* ce = app.add_subcommand("center-iso", "the map (z, t) -> (g1 z, g2 t) on the center");
  NP ce_v{3, "1+x", ""};
  add_np(ce, ce_v);
  ce->callback([&] { action = [&] { return run_single(g, "center-iso", np_json(ce_v)); }; });

  auto* s2 = app.add_subcommand("section2", "the explicit threefolds X and Y and their line-bundle data");
  std::string check, alpha = "-5/3", beta = "-1/3";
  s2->add_option("--check", check, "report only this check");
  s2->add_option("--alpha", alpha)->capture_default_str();
  s2->add_option("--beta", beta)->capture_default_str();
  s2->callback([&] {
    action = [&] {
      Json p{{"alpha", alpha}, {"beta", beta}};
      if (!check.empty()) p["check"] = check;
      return run_single(g, "section2", p);
    };
  });

  auto* rc = app.add_subcommand("recheck", "re-expand every certificate of a report file");
  std::string report_path;
  rc->add_option("report", report_path, "report file")->required();
  rc->callback([&] { action = [&] { return recheck(g, report_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  try {
    return action();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
