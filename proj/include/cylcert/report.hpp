#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/certificate.hpp"
#include "cylcert/modification.hpp"

namespace cylcert {

inline constexpr const char* kEngineVersion = "cylcert 0.1.0";

enum class Verdict { Pass, Fail, NotApplicable };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "fail";
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "not-applicable") return Verdict::NotApplicable;
  if (s == "fail") return Verdict::Fail;
  throw Error("unknown verdict '" + s + "'");
}

struct VerificationReport {
  std::string id, kind;
  Verdict verdict = Verdict::Fail;
  Json parameters = Json::object();
  Json summary = Json::object();
  std::vector<std::string> caveats;
  HomTable homs;
  std::vector<Certificate> certificates;
  std::uint64_t seed = 0;
  std::optional<double> wall_ms;

  template <class C>
  void add_hom(const std::string& name, const RingHom<C>& h) {
    homs[name] = cert::hom_of(h);
  }
  void add(Certificate c) { certificates.push_back(std::move(c)); }

  /// Stores both maps and certifies: each is a variety map (pullback equals
  /// cofactor times equation) and both round trips are the identity modulo the
  /// equations. h: k[tgt] -> k[src] is given as a chain of stored maps; `chk`
  /// is verify_isomorphism(h, hinv, src, tgt), whose cofactors and round-trip
  /// quotients become the certificates.
  template <class C>
  void add_iso(const std::string& prefix, const std::vector<std::string>& h_chain,
               const std::vector<std::string>& hinv_chain, const VarietyEq<C>& src, const VarietyEq<C>& tgt,
               const IsoCheck<C>& chk, const TowerPtr& ring = nullptr) {
    const auto &fwd = chk.forward, &bwd = chk.backward;
    add(cert::make(prefix + ".forward_map", src.ctx(),
                   {cert::term<C>(1, {tgt.eq}, h_chain), cert::term<C>(-1, {fwd.cofactor, src.eq})}, ring));
    add(cert::make(prefix + ".backward_map", tgt.ctx(),
                   {cert::term<C>(1, {src.eq}, hinv_chain), cert::term<C>(-1, {bwd.cofactor, tgt.eq})}, ring));
    auto round = [&](const VarietyEq<C>& v, const std::vector<std::string>& chain) {
      for (std::size_t i = 0; i < v.ctx()->size(); ++i) {
        auto q = chk.round_trip_quotients.find(v.name + ":" + v.ctx()->name(i));
        if (q == chk.round_trip_quotients.end()) continue;  // failed round trip: the verdict records it
        const MPoly<C> var = MPoly<C>::var(v.ctx(), i);
        add(cert::make(prefix + ".round_trip." + v.name + "." + v.ctx()->name(i), v.ctx(),
                       {cert::term<C>(1, {var}, chain), cert::term<C>(-1, {var}), cert::term<C>(-1, {q->second, v.eq})}, ring));
      }
    };
    std::vector<std::string> tgt_chain = h_chain, src_chain = hinv_chain;
    tgt_chain.insert(tgt_chain.end(), hinv_chain.begin(), hinv_chain.end());
    src_chain.insert(src_chain.end(), h_chain.begin(), h_chain.end());
    round(tgt, tgt_chain);
    round(src, src_chain);
  }
};

inline Json to_json(const VerificationReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  Json homs = Json::object();
  for (const auto& [name, h] : r.homs) homs[name] = to_json(h);
  Json j{{"id", r.id},           {"kind", r.kind},       {"verdict", to_string(r.verdict)},
         {"parameters", r.parameters}, {"summary", r.summary}, {"caveats", r.caveats},
         {"maps", homs},          {"certificates", certs}, {"seed", r.seed},
         {"engine", kEngineVersion}};
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  return j;
}

inline VerificationReport report_from_json(const Json& j) {
  VerificationReport r;
  r.id = j.at("id").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.parameters = j.value("parameters", Json::object());
  r.summary = j.value("summary", Json::object());
  r.caveats = j.value("caveats", std::vector<std::string>{});
  if (j.contains("maps"))
    for (const auto& [name, h] : j.at("maps").items()) r.homs[name] = cert_hom_from_json(h);
  for (const auto& c : j.at("certificates")) r.certificates.push_back(certificate_from_json(c));
  r.seed = j.value("seed", std::uint64_t{0});
  return r;
}

/// The document written by the CLI: one entry per scenario, in manifest order.
inline Json report_document(const std::vector<VerificationReport>& reports, std::uint64_t seed) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return Json{{"engine", kEngineVersion}, {"seed", seed}, {"reports", arr}};
}

inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

struct RecheckLine {
  std::string report_id;
  CertOutcome outcome;
};

struct RecheckResult {
  bool pass = true;
  std::vector<RecheckLine> lines;
};

/// Expands every stored certificate again. A report claiming "pass" must
/// carry at least one certificate; a failing certificate fails the recheck
/// whatever the report's verdict.
inline RecheckResult recheck_report(const Json& doc) {
  RecheckResult out;
  for (const auto& jr : doc.at("reports")) {
    const VerificationReport r = report_from_json(jr);
    if (r.verdict == Verdict::Pass && r.certificates.empty()) {
      out.pass = false;
      out.lines.push_back({r.id, {false, "pass verdict without certificates"}});
    }
    for (const auto& c : r.certificates) {
      auto o = check_certificate(c, r.homs);
      out.pass = out.pass && o.pass;
      out.lines.push_back({r.id, std::move(o)});
    }
  }
  return out;
}

}  // namespace cylcert
