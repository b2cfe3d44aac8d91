#pragma once

#include <cstdint>
#include <string_view>

#include <json.hpp>

namespace coke {

enum class CombineMode {
  // Thompson draw picks the cluster, contextual score picks the arm inside it.
  TwoStage,
  // One argmax over every arm of theta(cluster) + q.mu + eta - lambda * R.
  Additive,
};

std::string_view to_string(CombineMode m);
CombineMode parse_combine_mode(std::string_view s);

struct Ablation {
  bool disable_cluster = false;
  bool disable_context = false;
  bool disable_cost_regret = false;

  bool operator==(const Ablation&) const = default;
};

inline constexpr int kConfigSchema = 1;

struct EngineConfig {
  std::size_t d = 0;
  double lambda = 1.0;
  double sigma = 1.0;
  double delta = 0.1;
  double budget = 0.0;
  double prior_strength = 10.0;
  std::uint64_t seed = 0;
  Ablation ablation;
  CombineMode combine_mode = CombineMode::TwoStage;

  // 1 + sqrt(ln(2 / delta) / 2); refreshed by validate().
  double gamma() const { return gamma_; }

  // Checks ranges and recomputes gamma. Throws ConfigError.
  void validate();

  bool operator==(const EngineConfig& o) const;

 private:
  double gamma_ = 0.0;
};

double confidence_gamma(double delta);

// Builds a config from a raw key-value object. Required keys: d, budget.
// Unknown keys are rejected so typos surface instead of silently defaulting.
EngineConfig new_engine_config(const nlohmann::json& raw);

nlohmann::json to_json(const EngineConfig& cfg);

EngineConfig load_engine_config(const std::string& path);

}  // namespace coke
