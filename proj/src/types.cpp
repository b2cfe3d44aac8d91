#include "coke/types.hpp"

#include <cmath>

namespace coke {

std::string_view to_string(Cluster c) { return c == Cluster::LLM ? "LLM" : "KGM"; }

std::string_view to_string(CostMode m) {
  return m == CostMode::PerToken ? "per_token" : "per_call";
}

Cluster parse_cluster(std::string_view s) {
  if (s == "LLM" || s == "llm") return Cluster::LLM;
  if (s == "KGM" || s == "kgm") return Cluster::KGM;
  throw DataError("unknown cluster '" + std::string(s) + "' (expected LLM or KGM)");
}

CostMode parse_cost_mode(std::string_view s) {
  if (s == "per_token" || s == "PerToken") return CostMode::PerToken;
  if (s == "per_call" || s == "PerCall") return CostMode::PerCall;
  throw DataError("unknown cost_mode '" + std::string(s) + "' (expected per_token or per_call)");
}

void ArmSpec::validate() const {
  if (arm_id.empty()) throw DataError("arm_id must be nonempty");
  if (!std::isfinite(unit_price) || unit_price < 0.0)
    throw DataError("arm '" + arm_id + "': unit_price must be finite and >= 0");
  if (!(reported_accuracy >= 0.0 && reported_accuracy <= 1.0))
    throw DataError("arm '" + arm_id + "': reported_accuracy must lie in [0, 1]");
  if (sigma && !(std::isfinite(*sigma) && *sigma > 0.0))
    throw DataError("arm '" + arm_id + "': sigma override must be finite and > 0");
}

int Question::outcome(const std::string& arm_id) const {
  if (!outcomes) throw DataError("question '" + id + "' has no replay outcomes");
  auto it = outcomes->find(arm_id);
  if (it == outcomes->end())
    throw DataError("question '" + id + "' has no outcome for arm '" + arm_id + "'");
  return it->second;
}

}  // namespace coke
