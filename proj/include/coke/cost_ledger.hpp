#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "coke/types.hpp"

namespace coke {

// Price of one answer: unit_price * token_len for PerToken arms,
// unit_price for PerCall arms.
double unit_cost(const ArmSpec& spec, std::int64_t token_len);
double unit_cost(const ArmSpec& spec, const Question& q);

// A charge that would push LLM spend past the budget. This is an engine
// bug: admits() must have been consulted before the arm was chosen.
class BudgetBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ArmSpend {
  double total_cost = 0.0;
  double failure_cost = 0.0;
  std::uint64_t calls = 0;
};

class BudgetLedger {
 public:
  BudgetLedger(double budget_total, const std::vector<ArmSpec>& arms);

  // failure_cost / total_cost, or 0 for an arm that has cost nothing yet.
  double cost_regret(const std::string& arm_id) const;

  // KGM arms always pass; LLM arms pass iff llm_spend + cost <= budget.
  bool admits(const ArmSpec& spec, double projected_cost) const;
  bool admits(const ArmSpec& spec, const Question& q) const {
    return admits(spec, unit_cost(spec, q));
  }

  void charge(const std::string& arm_id, double cost, bool correct);

  double budget_total() const { return budget_total_; }
  double llm_spend() const { return llm_spend_; }
  double remaining() const { return budget_total_ - llm_spend_; }
  std::uint64_t llm_calls() const { return llm_calls_; }
  double total_spend() const;
  const std::map<std::string, ArmSpend>& per_arm() const { return per_arm_; }
  Cluster cluster_of(const std::string& arm_id) const;

  nlohmann::json snapshot() const;
  static BudgetLedger from_snapshot(const nlohmann::json& j, const std::vector<ArmSpec>& arms);

 private:
  const ArmSpend& spend(const std::string& arm_id) const;

  double budget_total_;
  double llm_spend_ = 0.0;
  std::uint64_t llm_calls_ = 0;
  std::map<std::string, ArmSpend> per_arm_;
  std::map<std::string, Cluster> clusters_;
};

}  // namespace coke
