#pragma once

#include <span>
#include <vector>

#include "coke/random.hpp"
#include "coke/types.hpp"

namespace coke {

inline constexpr double kMinPseudoCount = 1e-3;

// Beta(alpha, beta) belief over a cluster's success probability.
struct ClusterBelief {
  Cluster cluster = Cluster::LLM;
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t pulls = 0;
  // Seeded values, kept so conservation can be checked after any run.
  double alpha0 = 1.0;
  double beta0 = 1.0;

  double mean() const { return alpha / (alpha + beta); }
};

ClusterBelief uniform_belief(Cluster c);

// Prior mass prior_strength split by the mean reported accuracy of the
// cluster's arms; both pseudo-counts clamped to >= kMinPseudoCount.
ClusterBelief seed_prior(std::span<const ArmSpec> arms_in_cluster, double prior_strength);

// theta ~ Beta(alpha, beta) via G1 / (G1 + G2), G1 ~ Gamma(alpha), G2 ~ Gamma(beta).
double sample_theta(const ClusterBelief& belief, RandomSource& rng);

struct ClusterDraw {
  Cluster cluster;
  double theta;
};

// Argmax over theta; exact ties go to KGM, the cheaper cluster.
Cluster pick_cluster(std::span<const ClusterDraw> draws);

struct ClusterSelection {
  Cluster cluster;
  std::vector<ClusterDraw> draws;
};

ClusterSelection select_cluster(std::span<const ClusterBelief> beliefs, RandomSource& rng);

// Conjugate Beta-Bernoulli step: alpha += r, beta += 1 - r.
ClusterBelief update_posterior(ClusterBelief belief, int reward);

}  // namespace coke
