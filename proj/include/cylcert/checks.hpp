#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cylcert {

/// Outcome of one named verification with the data it produced
/// (cofactors, residuals) rendered as canonical polynomial strings.
struct NamedCheck {
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> data;
};

inline bool all_pass(const std::vector<NamedCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace cylcert
