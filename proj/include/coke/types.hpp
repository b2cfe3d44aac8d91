#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace coke {

// LLM arms are budget-constrained; KGM arms are the cheap local models.
enum class Cluster { LLM, KGM };

// Unit price is charged per billable token or once per invocation.
enum class CostMode { PerToken, PerCall };

std::string_view to_string(Cluster c);
std::string_view to_string(CostMode m);
Cluster parse_cluster(std::string_view s);
CostMode parse_cost_mode(std::string_view s);

inline constexpr std::size_t kNumClusters = 2;
inline constexpr Cluster kClusters[kNumClusters] = {Cluster::LLM, Cluster::KGM};

inline std::size_t cluster_index(Cluster c) { return c == Cluster::LLM ? 0 : 1; }

// Raised for malformed inputs: bad registry, config or dataset content.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ArmSpec {
  std::string arm_id;
  Cluster cluster = Cluster::LLM;
  double unit_price = 0.0;
  double reported_accuracy = 0.0;
  CostMode cost_mode = CostMode::PerToken;
  // Per-arm ridge coefficient; the engine-wide sigma applies when unset.
  std::optional<double> sigma;

  void validate() const;
};

struct Question {
  std::string id;
  Eigen::VectorXd embedding;
  std::int64_t token_len = 1;
  // Replay ground truth: arm_id -> 1 if that arm answers correctly.
  std::optional<std::map<std::string, int>> outcomes;

  int outcome(const std::string& arm_id) const;
};

struct ScoreBreakdown {
  double exploit = 0.0;         // q . mu
  double explore = 0.0;         // eta
  double regret_penalty = 0.0;  // lambda * R
  bool admissible = true;
};

struct HistoryRecord {
  std::uint64_t iteration = 0;
  std::string question_id;
  std::map<Cluster, double> theta_samples;
  Cluster chosen_cluster = Cluster::KGM;
  std::map<std::string, ScoreBreakdown> per_arm_scores;
  std::string chosen_arm;
  int reward = 0;
  double cost_charged = 0.0;
  double budget_remaining = 0.0;
};

}  // namespace coke
