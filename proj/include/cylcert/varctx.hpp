#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cylcert/errors.hpp"

namespace cylcert {

struct VarSpec {
  std::string name;
  bool laurent = false;
};

/// Ordered list of variable names with per-variable Laurent flags. Shared and
/// immutable; two contexts are interchangeable when names and flags agree.
class VarCtx {
 public:
  static constexpr std::size_t kMaxVars = 10;

  explicit VarCtx(std::vector<VarSpec> vars) : vars_(std::move(vars)) {
    if (vars_.size() > kMaxVars)
      throw Error("at most " + std::to_string(kMaxVars) + " variables per context");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].name.empty()) throw Error("empty variable name");
      for (std::size_t j = 0; j < i; ++j)
        if (vars_[i].name == vars_[j].name)
          throw Error("duplicate variable name '" + vars_[i].name + "'");
    }
  }

  std::size_t size() const { return vars_.size(); }
  const VarSpec& operator[](std::size_t i) const { return vars_.at(i); }
  const std::vector<VarSpec>& vars() const { return vars_; }
  const std::string& name(std::size_t i) const { return vars_.at(i).name; }
  bool laurent(std::size_t i) const { return vars_.at(i).laurent; }

  std::size_t index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return i;
    throw ContextError("variable '" + name + "' not in context " + describe());
  }
  bool has(const std::string& name) const {
    for (const auto& v : vars_)
      if (v.name == name) return true;
    return false;
  }

  std::string describe() const {
    std::string s = "(";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (i) s += ",";
      s += vars_[i].name;
      if (vars_[i].laurent) s += "^±1";
    }
    return s + ")";
  }

  friend bool operator==(const VarCtx& a, const VarCtx& b) {
    if (a.vars_.size() != b.vars_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i)
      if (a.vars_[i].name != b.vars_[i].name || a.vars_[i].laurent != b.vars_[i].laurent)
        return false;
    return true;
  }

 private:
  std::vector<VarSpec> vars_;
};

using CtxPtr = std::shared_ptr<const VarCtx>;

/// Builds a context from names; names in `laurent` get the Laurent flag.
inline CtxPtr make_ctx(const std::vector<std::string>& names,
                       const std::vector<std::string>& laurent = {}) {
  std::vector<VarSpec> specs;
  for (const auto& n : names) {
    bool l = false;
    for (const auto& m : laurent) l = l || (m == n);
    specs.push_back({n, l});
  }
  for (const auto& m : laurent) {
    bool found = false;
    for (const auto& n : names) found = found || (m == n);
    if (!found) throw ContextError("Laurent flag on unknown variable '" + m + "'");
  }
  return std::make_shared<const VarCtx>(std::move(specs));
}

inline bool same_ctx(const CtxPtr& a, const CtxPtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_ctx(const CtxPtr& a, const CtxPtr& b, const char* what) {
  if (!same_ctx(a, b))
    throw ContextError(std::string(what) + ": context mismatch " +
                       (a ? a->describe() : "<none>") + " vs " + (b ? b->describe() : "<none>"));
}

}  // namespace cylcert
