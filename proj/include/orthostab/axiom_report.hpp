#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace orthostab {

/// Outcome of one axiom over a sample set. `worst_value` is the largest
/// violation measure seen (or the closest call when everything passed).
struct AxiomCheck {
  std::string axiom;
  bool pass = true;
  std::string worst_witness;
  double worst_value = 0.0;
  std::string note;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const AxiomCheck* find(const std::string& axiom) const {
    for (const auto& c : checks)
      if (c.axiom == axiom) return &c;
    return nullptr;
  }
};

inline nlohmann::json to_json(const AxiomCheck& c) {
  nlohmann::json j{{"axiom", c.axiom},
                   {"pass", c.pass},
                   {"worst_witness", c.worst_witness},
                   {"worst_value", c.worst_value}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json to_json(const AxiomReport& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : r.checks) arr.push_back(to_json(c));
  return arr;
}

}  // namespace orthostab
