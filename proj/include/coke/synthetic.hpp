#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coke/dataset.hpp"
#include "coke/types.hpp"

namespace coke {

enum class ExpertStructure {
  // Topic centres are basis vectors; each arm's direction is its topic's centre.
  Orthogonal,
  // Topic centres and arm directions are independent random unit vectors.
  Random,
};

struct SyntheticArm {
  std::string arm_id;
  double target_accuracy = 0.5;
  // Orthogonal structure only; defaults to the arm's index modulo topics.
  std::optional<std::size_t> expert_topic;
  // Optional registry metadata, carried through so a generated world can
  // ship with its arm registry.
  std::optional<ArmSpec> registry;
};

struct SyntheticSpec {
  std::string name = "synthetic";
  std::size_t n = 1000;
  std::size_t d = 8;
  std::size_t topics = 0;  // 0: one topic per arm
  std::vector<SyntheticArm> arms;
  ExpertStructure structure = ExpertStructure::Orthogonal;
  // Norm scale of the isotropic embedding jitter around a topic centre
  // (per-coordinate std is noise / sqrt(d)).
  double noise = 0.2;
  // Logit slope s in P(correct) = sigmoid(s * w.q + bias).
  double sharpness = 6.0;
  std::int64_t token_min = 50;
  std::int64_t token_max = 400;
  std::uint64_t seed = 0;

  void validate() const;
};

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticSpec& spec);

// Generated data plus the latent structure that produced it.
struct SyntheticWorld {
  ReplayDataset dataset;
  std::vector<std::size_t> topic_of;  // per question
  std::vector<Eigen::VectorXd> directions;  // per arm
  std::vector<double> biases;  // per arm, calibrated
};

// Outcomes are Bernoulli(sigmoid(s * w_a . q + bias_a)) realised through one
// fixed uniform per (question, arm); bias_a is bisected until the realised
// marginal accuracy of arm a meets its target.
SyntheticWorld generate_world(const SyntheticSpec& spec);
ReplayDataset generate_synthetic(const SyntheticSpec& spec);

// Registry entries attached to the spec's arms (empty if none were given).
std::vector<ArmSpec> synthetic_registry(const SyntheticSpec& spec);

}  // namespace coke
