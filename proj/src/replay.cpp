#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <thread>

#include "coke/cost_ledger.hpp"
#include "coke/harness.hpp"
#include "coke/random.hpp"
#include "coke/registry.hpp"

namespace coke {

double always_arm_cost(const ReplayDataset& ds, const ArmSpec& arm) {
  double total = 0.0;
  for (const auto& q : ds.questions) total += unit_cost(arm, q);
  return total;
}

const ArmSpec& most_expensive_arm(const ReplayDataset& ds, const std::vector<ArmSpec>& arms) {
  if (arms.empty()) throw std::invalid_argument("empty arm registry");
  const ArmSpec* best = &arms.front();
  double best_cost = always_arm_cost(ds, *best);
  for (const auto& a : arms) {
    const double c = always_arm_cost(ds, a);
    if (c > best_cost) {
      best = &a;
      best_cost = c;
    }
  }
  return *best;
}

std::vector<std::size_t> replay_order(const ReplayDataset& ds, std::uint64_t seed, bool preserve_order) {
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!preserve_order) {
    RandomSource rng = RandomSource::for_stream(seed, Stream::Shuffle);
    std::shuffle(order.begin(), order.end(), rng.engine());
  }
  return order;
}

namespace {

std::map<std::string, double> question_costs(const Question& q, const std::vector<ArmSpec>& arms) {
  std::map<std::string, double> costs;
  for (const auto& a : arms) costs[a.arm_id] = unit_cost(a, q);
  return costs;
}

// Shared bookkeeping for policy runs and baselines.
class RunRecorder {
 public:
  RunRecorder(const ReplayDataset& ds, const std::vector<ArmSpec>& arms, double gamma,
              const RunOptions& options)
      : ds_(ds), arms_(arms), options_(options), tracker_(gamma) {
    if (options_.interval == 0) throw std::invalid_argument("heatmap interval must be positive");
    for (const auto& a : arms) counts_[a.arm_id] = 0;
  }

  void record(const Question& q, const std::string& chosen, int reward, double radius,
              double llm_spend) {
    ++k_;
    correct_ += reward;
    ++counts_[chosen];
    tracker_.record(step_regret(*q.outcomes, question_costs(q, arms_), chosen), chosen, radius);
    curve_.emplace_back(k_, tracker_.cumulative_sr());
    max_llm_spend_ = std::max(max_llm_spend_, llm_spend);
    if (heatmap_.empty() || heatmap_.back().end - heatmap_.back().start + 1 == options_.interval) {
      HeatmapRow row;
      row.start = k_;
      for (const auto& a : arms_) row.counts[a.arm_id] = 0;
      heatmap_.push_back(std::move(row));
    }
    heatmap_.back().end = k_;
    ++heatmap_.back().counts[chosen];
  }

  const RegretTracker& tracker() const { return tracker_; }

  RunResult finish(const BudgetLedger& ledger, std::string policy, nlohmann::json config, double budget) {
    RunResult r;
    r.config = std::move(config);
    r.policy = std::move(policy);
    r.questions = ds_.size();
    r.accuracy = ds_.size() ? static_cast<double>(correct_) / static_cast<double>(ds_.size()) : 0.0;
    r.total_cost_dollars = ledger.total_spend();
    r.total_llm_calls = ledger.llm_calls();
    for (const auto& [_, s] : ledger.per_arm()) r.total_calls += s.calls;
    const ArmSpec& ref = options_.reference_arm ? find_arm(arms_, *options_.reference_arm)
                                                : most_expensive_arm(ds_, arms_);
    r.reference_arm = ref.arm_id;
    r.reference_accuracy = ds_.marginal_accuracy().at(ref.arm_id);
    r.reference_cost = always_arm_cost(ds_, ref);
    r.cost_saving_vs_reference =
        r.reference_cost > 0.0 ? (r.total_cost_dollars - r.reference_cost) / r.reference_cost : 0.0;
    r.max_llm_spend = max_llm_spend_;
    r.budget = budget;
    r.per_arm_selection_counts = counts_;
    r.regret_curve = std::move(curve_);
    r.interval_heatmap = std::move(heatmap_);
    r.ledger = ledger.snapshot();
    r.regret_bound_rhs = tracker_.bound_rhs();
    r.regret_bound_holds = tracker_.cumulative_sr() <= tracker_.bound_rhs();
    return r;
  }

 private:
  const ReplayDataset& ds_;
  const std::vector<ArmSpec>& arms_;
  RunOptions options_;
  RegretTracker tracker_;
  std::size_t k_ = 0;
  std::size_t correct_ = 0;
  double max_llm_spend_ = 0.0;
  std::map<std::string, std::size_t> counts_;
  std::vector<std::pair<std::size_t, double>> curve_;
  std::vector<HeatmapRow> heatmap_;
};

void check_inputs(const ReplayDataset& ds, const std::vector<ArmSpec>& arms) {
  if (arms.empty()) throw DataError("arm registry is empty");
  check_against_registry(ds, arms);
  if (ds.questions.empty()) throw DataError("dataset '" + ds.name + "' is empty");
}

}  // namespace

RunResult run_policy(const ReplayDataset& ds, const std::vector<ArmSpec>& arms,
                     const EngineConfig& config, const RunOptions& options,
                     std::vector<HistoryRecord>* history, nlohmann::json* final_checkpoint) {
  check_inputs(ds, arms);
  if (ds.d != config.d)
    throw DataError("dataset dimension " + std::to_string(ds.d) + " differs from config d = " +
                    std::to_string(config.d));
  CokePolicy policy(config, arms);
  RunRecorder rec(ds, arms, policy.config().gamma(), options);
  for (std::size_t idx : replay_order(ds, config.seed, options.preserve_order)) {
    const Question& q = ds.questions[idx];
    const Decision dec = policy.decide(q);
    // Bandit feedback: only the chosen arm's outcome reaches the policy.
    const int reward = q.outcome(dec.chosen_arm);
    policy.observe(dec, reward);
    rec.record(q, dec.chosen_arm, reward, dec.radius, policy.state().ledger.llm_spend());
  }
  if (history) *history = policy.state().history;
  if (final_checkpoint) *final_checkpoint = policy.checkpoint();
  return rec.finish(policy.state().ledger, "coke", to_json(policy.config()), config.budget);
}

RunResult run_baseline(const ReplayDataset& ds, const std::vector<ArmSpec>& arms,
                       const Baseline& baseline, std::uint64_t seed, const RunOptions& options) {
  check_inputs(ds, arms);
  if (baseline.kind == Baseline::Kind::AlwaysArm) find_arm(arms, baseline.arm_id);
  BudgetLedger ledger(std::numeric_limits<double>::max(), arms);
  RunRecorder rec(ds, arms, 1.0, options);
  RandomSource rng = RandomSource::for_stream(seed, Stream::Baseline);
  for (std::size_t idx : replay_order(ds, seed, options.preserve_order)) {
    const Question& q = ds.questions[idx];
    const ArmSpec* chosen = nullptr;
    switch (baseline.kind) {
      case Baseline::Kind::AlwaysArm:
        chosen = &find_arm(arms, baseline.arm_id);
        break;
      case Baseline::Kind::Random:
        chosen = &arms[rng.index(arms.size())];
        break;
      case Baseline::Kind::OracleBest: {
        // Cheapest correct arm; the cheapest arm overall when none is correct.
        const ArmSpec* cheapest = nullptr;
        for (const auto& a : arms) {
          const bool better_correct =
              q.outcome(a.arm_id) == 1 &&
              (!chosen || unit_cost(a, q) < unit_cost(*chosen, q));
          if (better_correct) chosen = &a;
          if (!cheapest || unit_cost(a, q) < unit_cost(*cheapest, q)) cheapest = &a;
        }
        if (!chosen) chosen = cheapest;
        break;
      }
    }
    const int reward = q.outcome(chosen->arm_id);
    ledger.charge(chosen->arm_id, unit_cost(*chosen, q), reward == 1);
    rec.record(q, chosen->arm_id, reward, 0.0, ledger.llm_spend());
  }
  return rec.finish(ledger, baseline.name(), {{"baseline", baseline.name()}, {"seed", seed}}, 0.0);
}

std::vector<RunResult> sweep(const ReplayDataset& ds, const std::vector<ArmSpec>& arms,
                             const EngineConfig& base_config, const SweepAxis& axis,
                             const RunOptions& options) {
  check_inputs(ds, arms);
  const double full_budget = always_arm_cost(ds, most_expensive_arm(ds, arms));
  std::vector<EngineConfig> configs;
  for (double v : axis.values) {
    EngineConfig cfg = base_config;
    if (axis.kind == SweepAxis::Kind::Budget) cfg.budget = v * full_budget;
    else cfg.lambda = v;
    cfg.validate();
    configs.push_back(cfg);
  }

  std::vector<RunResult> results(configs.size());
  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(configs.size(), 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(configs.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = run_policy(ds, arms, configs[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace coke
