#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "coke/arm_model.hpp"
#include "coke/cluster_sampler.hpp"
#include "coke/config.hpp"
#include "coke/cost_ledger.hpp"
#include "coke/random.hpp"
#include "coke/types.hpp"

namespace coke {

class NoAdmissibleArm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Decision {
  std::uint64_t iteration = 0;
  std::string question_id;
  Eigen::VectorXd context;
  std::map<Cluster, double> theta_samples;
  Cluster chosen_cluster = Cluster::KGM;
  std::size_t chosen_index = 0;
  std::string chosen_arm;
  // Indexed like the registry.
  std::vector<ScoreBreakdown> scores;
  std::vector<double> combined;
  double cost = 0.0;
  // Exploration bonus of the chosen arm, computed even when the context
  // term is ablated; this is the confidence radius the regret bound sums.
  double radius = 0.0;
};

// Index of the maximal score; exact ties are split uniformly with rng.
std::size_t select_arm(std::span<const double> scores, RandomSource& rng);

// Mutable run state. iteration == resumed_at + history.size().
struct PolicyState {
  EngineConfig config;
  std::vector<ArmSpec> specs;
  std::vector<ClusterBelief> beliefs;
  std::vector<ArmModel> arms;
  BudgetLedger ledger;
  std::vector<HistoryRecord> history;
  std::uint64_t iteration = 0;
  std::uint64_t resumed_at = 0;
};

// Cost-aware selector: cluster Thompson draw, contextual ridge score,
// cost-regret penalty, and a hard LLM budget.
class CokePolicy {
 public:
  CokePolicy(EngineConfig config, std::vector<ArmSpec> arms);

  Decision decide(const Question& q);
  void observe(const Decision& decision, int reward);

  const PolicyState& state() const { return state_; }
  const EngineConfig& config() const { return state_.config; }
  const ClusterBelief& belief(Cluster c) const;
  const ArmModel& arm(const std::string& arm_id) const;

  nlohmann::json checkpoint() const;
  static CokePolicy from_checkpoint(const nlohmann::json& j, std::vector<ArmSpec> arms);

 private:
  PolicyState state_;
  RandomSource sampler_rng_;
  RandomSource tiebreak_rng_;
};

// -- Selection regret ---------------------------------------------------------

struct StepRegret {
  std::optional<std::string> best_arm;  // cheapest correct arm, if any
  int regret = 0;
};

// 0 if the chosen arm is correct or no arm is; 1 otherwise.
StepRegret step_regret(const std::map<std::string, int>& outcomes,
                       const std::map<std::string, double>& per_arm_costs,
                       const std::string& chosen);

struct RegretEntry {
  std::string best_arm;
  std::string chosen_arm;
  int step_regret = 0;
  double radius = 0.0;
};

class RegretTracker {
 public:
  explicit RegretTracker(double gamma) : gamma_(gamma) {}

  void record(const StepRegret& step, const std::string& chosen_arm, double radius);

  double cumulative_sr() const { return cumulative_; }
  double radius_sum() const { return radius_sum_; }
  // 2 gamma + 2 * sum of confidence radii so far.
  double bound_rhs() const { return 2.0 * gamma_ + 2.0 * radius_sum_; }
  const std::vector<RegretEntry>& per_step() const { return steps_; }

 private:
  double gamma_;
  double cumulative_ = 0.0;
  double radius_sum_ = 0.0;
  std::vector<RegretEntry> steps_;
};

// cumulative SR <= 2 gamma + 2 sum radius over a completed run.
bool bound_check(const RegretTracker& tracker, std::span<const HistoryRecord> history, double gamma);

// -- History serialization ----------------------------------------------------

nlohmann::json to_json(const HistoryRecord& r);
void write_history_jsonl(std::ostream& out, std::span<const HistoryRecord> history);

}  // namespace coke
