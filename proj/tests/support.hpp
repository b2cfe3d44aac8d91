#pragma once

#include <map>
#include <string>
#include <vector>

#include "coke/random.hpp"
#include "coke/types.hpp"

namespace testing {

inline std::string fixture(const std::string& name) { return std::string(COKE_FIXTURE_DIR) + "/" + name; }

// HamQA / GPT-3.5 / GPT-4 with CSQA-style prices and reported accuracies.
inline std::vector<coke::ArmSpec> csqa_arms() {
  using coke::Cluster;
  using coke::CostMode;
  return {{"HamQA", Cluster::KGM, 0.0, 0.739, CostMode::PerCall, {}},
          {"GPT-3.5", Cluster::LLM, 2e-6, 0.710, CostMode::PerToken, {}},
          {"GPT-4", Cluster::LLM, 3e-5, 0.802, CostMode::PerToken, {}}};
}

inline Eigen::VectorXd unit(std::size_t d, std::size_t i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

inline Eigen::VectorXd random_vector(std::size_t d, coke::RandomSource& rng) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  return v;
}

inline coke::Question question(std::string id, Eigen::VectorXd emb, std::int64_t tokens,
                               std::map<std::string, int> outcomes = {}) {
  coke::Question q;
  q.id = std::move(id);
  q.embedding = std::move(emb);
  q.token_len = tokens;
  if (!outcomes.empty()) q.outcomes = std::move(outcomes);
  return q;
}

}  // namespace testing
