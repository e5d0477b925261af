#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cylcert/errors.hpp"
#include "cylcert/mpoly.hpp"
#include "cylcert/poly_io.hpp"
#include "cylcert/ringhom.hpp"
#include "cylcert/tower.hpp"

namespace cylcert {

using Json = nlohmann::json;

/// A stored substitution, referenced by name from certificate terms.
struct CertHom {
  CtxPtr source, target;
  std::vector<std::string> images;
};
using HomTable = std::map<std::string, CertHom>;

/// maps.back()(...maps.front()(product of factors)). The factors live in the
/// source of the first map, or in the certificate context when there is none.
struct CertTerm {
  std::vector<std::string> factors;
  std::vector<std::string> maps;
};

struct TowerSpec {
  std::string name;
  int degree = 1;
  std::string value;  // gen^degree, written over the lower levels
};

/// Claims: the terms sum to zero (mod var^order when `mod` is set); each
/// polynomial in `nonzero` is nonzero under the same truncation and, when
/// `reduced` is set, has degree below the bound in that variable.
struct Certificate {
  std::string name;
  CtxPtr ctx;
  std::vector<TowerSpec> tower;
  std::vector<CertTerm> terms;
  std::optional<std::pair<std::string, int>> mod;
  std::vector<std::string> nonzero;
  std::optional<std::pair<std::string, int>> reduced;
};

inline Json ctx_to_json(const CtxPtr& c) {
  Json vars = Json::array(), laurent = Json::array();
  for (std::size_t i = 0; i < c->size(); ++i) {
    vars.push_back(c->name(i));
    if (c->laurent(i)) laurent.push_back(c->name(i));
  }
  return Json{{"vars", vars}, {"laurent", laurent}};
}

inline CtxPtr ctx_from_json(const Json& j) {
  return make_ctx(j.at("vars").get<std::vector<std::string>>(), j.value("laurent", std::vector<std::string>{}));
}

inline std::vector<TowerSpec> tower_specs(const TowerPtr& ring) {
  std::vector<TowerSpec> out;
  if (!ring) return out;
  TowerPtr prefix = Tower::rationals();
  const CtxPtr empty = make_ctx({});
  for (const auto& l : ring->levels()) {
    for (const auto& [e, q] : l.rule)
      if (e[prefix->height()] != 0) throw Error("tower level '" + l.name + "' is not a pure root");
    TowerElem value(prefix->height() ? prefix : nullptr, l.rule);
    out.push_back({l.name, l.degree, to_string(TPoly::constant(empty, value))});
    prefix = prefix->adjoin_root(l.name, l.degree, value);
  }
  return out;
}

inline TowerPtr tower_from_specs(const std::vector<TowerSpec>& specs) {
  if (specs.empty()) return nullptr;
  TowerPtr ring = Tower::rationals();
  const CtxPtr empty = make_ctx({});
  for (const auto& s : specs) {
    TPoly v = parse_tpoly(s.value, empty, ring->height() ? ring : nullptr);
    ring = ring->adjoin_root(s.name, s.degree, v.constant_term());
  }
  return ring;
}

inline Json to_json(const CertHom& h) {
  return Json{{"source", ctx_to_json(h.source)}, {"target", ctx_to_json(h.target)}, {"images", h.images}};
}

inline CertHom cert_hom_from_json(const Json& j) {
  return CertHom{ctx_from_json(j.at("source")), ctx_from_json(j.at("target")),
                 j.at("images").get<std::vector<std::string>>()};
}

inline Json to_json(const Certificate& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms) {
    Json jt{{"factors", t.factors}};
    if (!t.maps.empty()) jt["maps"] = t.maps;
    terms.push_back(jt);
  }
  Json j{{"name", c.name}, {"ctx", ctx_to_json(c.ctx)}, {"terms", terms}};
  if (!c.tower.empty()) {
    Json tw = Json::array();
    for (const auto& s : c.tower) tw.push_back(Json{{"name", s.name}, {"degree", s.degree}, {"value", s.value}});
    j["tower"] = tw;
  }
  if (c.mod) j["mod"] = Json{{"var", c.mod->first}, {"order", c.mod->second}};
  if (!c.nonzero.empty()) j["nonzero"] = c.nonzero;
  if (c.reduced) j["reduced"] = Json{{"var", c.reduced->first}, {"below", c.reduced->second}};
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  Certificate c;
  c.name = j.at("name").get<std::string>();
  c.ctx = ctx_from_json(j.at("ctx"));
  if (j.contains("tower"))
    for (const auto& s : j.at("tower"))
      c.tower.push_back({s.at("name").get<std::string>(), s.at("degree").get<int>(), s.at("value").get<std::string>()});
  for (const auto& t : j.at("terms"))
    c.terms.push_back({t.at("factors").get<std::vector<std::string>>(), t.value("maps", std::vector<std::string>{})});
  if (j.contains("mod")) c.mod = std::make_pair(j.at("mod").at("var").get<std::string>(), j.at("mod").at("order").get<int>());
  if (j.contains("nonzero")) c.nonzero = j.at("nonzero").get<std::vector<std::string>>();
  if (j.contains("reduced"))
    c.reduced = std::make_pair(j.at("reduced").at("var").get<std::string>(), j.at("reduced").at("below").get<int>());
  return c;
}

struct CertOutcome {
  bool pass = false;
  std::string message;
};

/// Re-verifies by expansion only: parse, substitute, multiply, add, compare.
inline CertOutcome check_certificate(const Certificate& c, const HomTable& homs) {
  try {
    const TowerPtr ring = tower_from_specs(c.tower);
    auto cut = [&](const TPoly& p) { return c.mod ? p.truncated(c.ctx->index(c.mod->first), c.mod->second) : p; };
    std::map<std::string, RingHom<TowerElem>> parsed;
    auto hom = [&](const std::string& name) -> const RingHom<TowerElem>& {
      auto it = parsed.find(name);
      if (it != parsed.end()) return it->second;
      auto h = homs.find(name);
      if (h == homs.end()) throw Error("unknown map '" + name + "'");
      std::vector<TPoly> imgs;
      for (const auto& s : h->second.images) imgs.push_back(parse_tpoly(s, h->second.target, ring));
      return parsed.emplace(name, RingHom<TowerElem>(h->second.source, h->second.target, std::move(imgs))).first->second;
    };
    TPoly sum(c.ctx);
    for (const auto& t : c.terms) {
      CtxPtr here = t.maps.empty() ? c.ctx : hom(t.maps.front()).source();
      TPoly prod = TPoly::one(here);
      for (const auto& f : t.factors) prod *= parse_tpoly(f, here, ring);
      for (const auto& m : t.maps) {
        const auto& h = hom(m);
        if (!same_ctx(prod.ctx(), h.source())) throw ContextError("map '" + m + "' does not chain");
        prod = h.apply(prod);
      }
      if (!same_ctx(prod.ctx(), c.ctx)) throw ContextError("term does not land in the certificate context");
      sum += prod;
    }
    const TPoly total = cut(sum);
    if (!total.is_zero()) return {false, c.name + ": identity fails, leftover " + to_string(total)};
    for (const auto& s : c.nonzero) {
      const TPoly p = cut(parse_tpoly(s, c.ctx, ring));
      if (p.is_zero()) return {false, c.name + ": expected nonzero polynomial is zero"};
      if (c.reduced && p.degree(c.ctx->index(c.reduced->first)) >= c.reduced->second)
        return {false, c.name + ": remainder is not reduced in " + c.reduced->first};
    }
    return {true, c.name + ": ok"};
  } catch (const std::exception& e) {
    return {false, c.name + ": " + e.what()};
  }
}

namespace cert {

template <class C>
CertHom hom_of(const RingHom<C>& h) {
  CertHom m{h.source(), h.target(), {}};
  for (const auto& img : h.images()) m.images.push_back(to_string(img));
  return m;
}

/// One summand sign * prod(factors), optionally pushed through named maps.
template <class C>
CertTerm term(int sign, const std::vector<MPoly<C>>& factors, std::vector<std::string> maps = {}) {
  CertTerm t;
  if (sign < 0) t.factors.push_back("-1");
  for (const auto& f : factors) t.factors.push_back(to_string(f));
  t.maps = std::move(maps);
  return t;
}

inline Certificate make(std::string name, const CtxPtr& ctx, std::vector<CertTerm> terms, const TowerPtr& ring = nullptr) {
  return Certificate{std::move(name), ctx, tower_specs(ring), std::move(terms), std::nullopt, {}, std::nullopt};
}

}  // namespace cert

}  // namespace cylcert
