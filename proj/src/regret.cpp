#include <ostream>

#include "coke/policy.hpp"

namespace coke {

using nlohmann::json;

StepRegret step_regret(const std::map<std::string, int>& outcomes,
                       const std::map<std::string, double>& per_arm_costs,
                       const std::string& chosen) {
  StepRegret out;
  double best_cost = 0.0;
  for (const auto& [arm, correct] : outcomes) {
    if (correct != 1) continue;
    auto it = per_arm_costs.find(arm);
    if (it == per_arm_costs.end()) throw std::out_of_range("step_regret: no cost for arm '" + arm + "'");
    if (!out.best_arm || it->second < best_cost) {
      out.best_arm = arm;
      best_cost = it->second;
    }
  }
  auto chosen_it = outcomes.find(chosen);
  if (chosen_it == outcomes.end()) throw std::out_of_range("step_regret: no outcome for '" + chosen + "'");
  out.regret = (chosen_it->second == 1 || !out.best_arm) ? 0 : 1;
  return out;
}

void RegretTracker::record(const StepRegret& step, const std::string& chosen_arm, double radius) {
  steps_.push_back({step.best_arm.value_or(""), chosen_arm, step.regret, radius});
  cumulative_ += step.regret;
  radius_sum_ += radius;
}

bool bound_check(const RegretTracker& tracker, std::span<const HistoryRecord> history, double gamma) {
  if (tracker.per_step().size() != history.size())
    throw std::invalid_argument("bound_check: tracker and history lengths differ");
  return tracker.cumulative_sr() <= 2.0 * gamma + 2.0 * tracker.radius_sum();
}

json to_json(const HistoryRecord& r) {
  json theta = json::object();
  for (const auto& [c, t] : r.theta_samples) theta[std::string(to_string(c))] = t;
  json scores = json::object();
  for (const auto& [id, s] : r.per_arm_scores) {
    scores[id] = {{"exploit", s.exploit},
                  {"explore", s.explore},
                  {"regret_penalty", s.regret_penalty},
                  {"admissible", s.admissible}};
  }
  return json{{"iteration", r.iteration},
              {"question_id", r.question_id},
              {"theta_samples", theta},
              {"chosen_cluster", to_string(r.chosen_cluster)},
              {"per_arm_scores", scores},
              {"chosen_arm", r.chosen_arm},
              {"reward", r.reward},
              {"cost_charged", r.cost_charged},
              {"budget_remaining", r.budget_remaining}};
}

void write_history_jsonl(std::ostream& out, std::span<const HistoryRecord> history) {
  for (const auto& r : history) out << to_json(r).dump() << '\n';
}

}  // namespace coke
