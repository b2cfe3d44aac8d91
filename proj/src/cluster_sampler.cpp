#include "coke/cluster_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coke {

ClusterBelief uniform_belief(Cluster c) { return ClusterBelief{c, 1.0, 1.0, 0, 1.0, 1.0}; }

ClusterBelief seed_prior(std::span<const ArmSpec> arms_in_cluster, double prior_strength) {
  if (arms_in_cluster.empty()) throw std::invalid_argument("seed_prior: cluster has no arms");
  if (!(prior_strength > 0.0)) throw std::invalid_argument("seed_prior: prior_strength must be > 0");
  const Cluster c = arms_in_cluster.front().cluster;
  double sum = 0.0;
  for (const auto& arm : arms_in_cluster) {
    if (arm.cluster != c) throw std::invalid_argument("seed_prior: arms span more than one cluster");
    sum += arm.reported_accuracy;
  }
  const double mean = sum / static_cast<double>(arms_in_cluster.size());
  ClusterBelief b;
  b.cluster = c;
  b.alpha = std::max(prior_strength * mean, kMinPseudoCount);
  b.beta = std::max(prior_strength * (1.0 - mean), kMinPseudoCount);
  b.alpha0 = b.alpha;
  b.beta0 = b.beta;
  return b;
}

double sample_theta(const ClusterBelief& belief, RandomSource& rng) {
  const double g1 = rng.gamma(belief.alpha);
  const double g2 = rng.gamma(belief.beta);
  const double total = g1 + g2;
  // Tiny shapes can underflow both draws; fall back to the posterior mean.
  double theta = total > 0.0 ? g1 / total : belief.mean();
  constexpr double lo = std::numeric_limits<double>::min();
  return std::clamp(theta, lo, std::nextafter(1.0, 0.0));
}

Cluster pick_cluster(std::span<const ClusterDraw> draws) {
  if (draws.empty()) throw std::invalid_argument("pick_cluster: no clusters");
  const ClusterDraw* best = &draws.front();
  for (const auto& d : draws.subspan(1)) {
    if (d.theta > best->theta || (d.theta == best->theta && d.cluster == Cluster::KGM)) best = &d;
  }
  return best->cluster;
}

ClusterSelection select_cluster(std::span<const ClusterBelief> beliefs, RandomSource& rng) {
  ClusterSelection sel;
  sel.draws.reserve(beliefs.size());
  for (const auto& b : beliefs) sel.draws.push_back({b.cluster, sample_theta(b, rng)});
  sel.cluster = pick_cluster(sel.draws);
  return sel;
}

ClusterBelief update_posterior(ClusterBelief belief, int reward) {
  if (reward != 0 && reward != 1) throw std::invalid_argument("update_posterior: reward must be 0 or 1");
  belief.alpha += reward;
  belief.beta += 1 - reward;
  ++belief.pulls;
  return belief;
}

}  // namespace coke
