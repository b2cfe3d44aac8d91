#include "coke/cost_ledger.hpp"

#include <cmath>

namespace coke {

double unit_cost(const ArmSpec& spec, std::int64_t token_len) {
  return spec.cost_mode == CostMode::PerToken ? spec.unit_price * static_cast<double>(token_len)
                                              : spec.unit_price;
}

double unit_cost(const ArmSpec& spec, const Question& q) { return unit_cost(spec, q.token_len); }

BudgetLedger::BudgetLedger(double budget_total, const std::vector<ArmSpec>& arms)
    : budget_total_(budget_total) {
  if (!(budget_total >= 0.0) || !std::isfinite(budget_total))
    throw std::invalid_argument("budget must be finite and >= 0");
  for (const auto& a : arms) {
    per_arm_[a.arm_id] = ArmSpend{};
    clusters_[a.arm_id] = a.cluster;
  }
}

const ArmSpend& BudgetLedger::spend(const std::string& arm_id) const {
  auto it = per_arm_.find(arm_id);
  if (it == per_arm_.end()) throw std::out_of_range("ledger: unknown arm '" + arm_id + "'");
  return it->second;
}

Cluster BudgetLedger::cluster_of(const std::string& arm_id) const {
  auto it = clusters_.find(arm_id);
  if (it == clusters_.end()) throw std::out_of_range("ledger: unknown arm '" + arm_id + "'");
  return it->second;
}

double BudgetLedger::cost_regret(const std::string& arm_id) const {
  const ArmSpend& s = spend(arm_id);
  if (s.total_cost <= 0.0) return 0.0;
  return s.failure_cost / s.total_cost;
}

bool BudgetLedger::admits(const ArmSpec& spec, double projected_cost) const {
  if (spec.cluster == Cluster::KGM) return true;
  return llm_spend_ + projected_cost <= budget_total_;
}

void BudgetLedger::charge(const std::string& arm_id, double cost, bool correct) {
  if (!(cost >= 0.0) || !std::isfinite(cost))
    throw std::invalid_argument("ledger: charge must be finite and >= 0");
  auto it = per_arm_.find(arm_id);
  if (it == per_arm_.end()) throw std::out_of_range("ledger: unknown arm '" + arm_id + "'");
  const bool llm = clusters_.at(arm_id) == Cluster::LLM;
  if (llm && !(llm_spend_ + cost <= budget_total_))
    throw BudgetBreach("ledger: charging " + std::to_string(cost) + " to '" + arm_id +
                       "' would exceed budget " + std::to_string(budget_total_));
  ArmSpend& s = it->second;
  s.total_cost += cost;
  if (!correct) s.failure_cost += cost;
  ++s.calls;
  if (llm) {
    llm_spend_ += cost;
    ++llm_calls_;
  }
}

double BudgetLedger::total_spend() const {
  double total = 0.0;
  for (const auto& [_, s] : per_arm_) total += s.total_cost;
  return total;
}

nlohmann::json BudgetLedger::snapshot() const {
  nlohmann::json arms = nlohmann::json::object();
  for (const auto& [id, s] : per_arm_) {
    arms[id] = {{"total_cost", s.total_cost},
                {"failure_cost", s.failure_cost},
                {"calls", s.calls},
                {"cost_regret", cost_regret(id)}};
  }
  return {{"budget_total", budget_total_},
          {"llm_spend", llm_spend_},
          {"llm_calls", llm_calls_},
          {"per_arm", arms}};
}

BudgetLedger BudgetLedger::from_snapshot(const nlohmann::json& j, const std::vector<ArmSpec>& arms) {
  BudgetLedger ledger(j.at("budget_total").get<double>(), arms);
  ledger.llm_spend_ = j.at("llm_spend").get<double>();
  ledger.llm_calls_ = j.at("llm_calls").get<std::uint64_t>();
  for (const auto& [id, s] : j.at("per_arm").items()) {
    auto it = ledger.per_arm_.find(id);
    if (it == ledger.per_arm_.end())
      throw DataError("ledger snapshot names unregistered arm '" + id + "'");
    it->second.total_cost = s.at("total_cost").get<double>();
    it->second.failure_cost = s.at("failure_cost").get<double>();
    it->second.calls = s.at("calls").get<std::uint64_t>();
  }
  return ledger;
}

}  // namespace coke
