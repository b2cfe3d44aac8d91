#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coke/config.hpp"
#include "coke/dataset.hpp"
#include "coke/policy.hpp"
#include "coke/types.hpp"

namespace coke {

struct RunOptions {
  // Replay in file order instead of a seed-shuffled order.
  bool preserve_order = false;
  // Width of the selection-heatmap iteration intervals.
  std::size_t interval = 250;
  // Arm used for the savings comparison; defaults to the most expensive.
  std::optional<std::string> reference_arm;
  // Sweep worker threads; 0 means hardware concurrency.
  std::size_t threads = 0;
};

struct HeatmapRow {
  std::size_t start = 0;  // first iteration, 1-based
  std::size_t end = 0;    // last iteration, inclusive
  std::map<std::string, std::size_t> counts;
};

struct RunResult {
  nlohmann::json config;
  std::string policy;
  std::size_t questions = 0;
  double accuracy = 0.0;
  double total_cost_dollars = 0.0;
  std::uint64_t total_llm_calls = 0;
  std::uint64_t total_calls = 0;
  std::string reference_arm;
  double reference_accuracy = 0.0;
  double reference_cost = 0.0;
  // (cost - reference_cost) / reference_cost; negative is a saving.
  double cost_saving_vs_reference = 0.0;
  double max_llm_spend = 0.0;
  double budget = 0.0;
  std::map<std::string, std::size_t> per_arm_selection_counts;
  std::vector<std::pair<std::size_t, double>> regret_curve;
  std::vector<HeatmapRow> interval_heatmap;
  nlohmann::json ledger;
  double regret_bound_rhs = 0.0;
  bool regret_bound_holds = true;

  double error_rate() const { return 1.0 - accuracy; }
  double accuracy_delta_vs_reference() const { return accuracy - reference_accuracy; }
  nlohmann::json to_json() const;
};

struct Baseline {
  enum class Kind { AlwaysArm, Random, OracleBest };
  Kind kind = Kind::OracleBest;
  std::string arm_id;  // AlwaysArm only

  static Baseline parse(const std::string& text);  // always:<arm> | random | oracle
  std::string name() const;
};

// Cost of routing every question to arm_id.
double always_arm_cost(const ReplayDataset& ds, const ArmSpec& arm);
// Arm with the largest all-questions cost (first wins ties).
const ArmSpec& most_expensive_arm(const ReplayDataset& ds, const std::vector<ArmSpec>& arms);

// Question order used by every run with this seed.
std::vector<std::size_t> replay_order(const ReplayDataset& ds, std::uint64_t seed, bool preserve_order);

// Full sequential decide -> reveal chosen outcome -> observe pass.
RunResult run_policy(const ReplayDataset& ds, const std::vector<ArmSpec>& arms,
                     const EngineConfig& config, const RunOptions& options = {},
                     std::vector<HistoryRecord>* history = nullptr,
                     nlohmann::json* final_checkpoint = nullptr);

RunResult run_baseline(const ReplayDataset& ds, const std::vector<ArmSpec>& arms,
                       const Baseline& baseline, std::uint64_t seed, const RunOptions& options = {});

struct SweepAxis {
  enum class Kind { Budget, Lambda };
  Kind kind = Kind::Lambda;
  std::vector<double> values;

  // "budget=0.5:1.0:0.1", "budget=0.5,0.8" or "lambda=0.001,0.1,1".
  static SweepAxis parse(const std::string& text);
  std::string name() const { return kind == Kind::Budget ? "budget" : "lambda"; }
};

// One fresh run per axis value, all sharing base_config.seed. Budget values
// are fractions of the all-questions cost of the most expensive arm.
std::vector<RunResult> sweep(const ReplayDataset& ds, const std::vector<ArmSpec>& arms,
                             const EngineConfig& base_config, const SweepAxis& axis,
                             const RunOptions& options = {});

void write_sweep_csv(std::ostream& out, const SweepAxis& axis, const std::vector<RunResult>& results);
void write_regret_csv(std::ostream& out, const RunResult& result);
void write_heatmap_csv(std::ostream& out, const RunResult& result);
// One row per result: accuracy, delta vs reference, saving percentage.
void print_summary(std::ostream& out, const std::vector<RunResult>& results);

}  // namespace coke
