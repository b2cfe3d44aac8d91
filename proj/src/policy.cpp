#include "coke/policy.hpp"

#include <algorithm>

#include "coke/registry.hpp"

namespace coke {

using nlohmann::json;

std::size_t select_arm(std::span<const double> scores, RandomSource& rng) {
  if (scores.empty()) throw std::invalid_argument("select_arm: no candidates");
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] == best) ties.push_back(i);
  }
  return ties.size() == 1 ? ties.front() : ties[rng.index(ties.size())];
}

namespace {

std::vector<ClusterBelief> seed_beliefs(const std::vector<ArmSpec>& arms, double prior_strength) {
  std::vector<ClusterBelief> beliefs;
  for (Cluster c : kClusters) {
    std::vector<ArmSpec> members;
    for (const auto& a : arms) {
      if (a.cluster == c) members.push_back(a);
    }
    if (!members.empty()) beliefs.push_back(seed_prior(members, prior_strength));
  }
  return beliefs;
}

std::vector<ArmModel> build_models(const std::vector<ArmSpec>& arms, const EngineConfig& cfg) {
  std::vector<ArmModel> models;
  models.reserve(arms.size());
  for (const auto& a : arms) models.emplace_back(a, cfg.d, a.sigma.value_or(cfg.sigma));
  return models;
}

PolicyState make_state(EngineConfig config, std::vector<ArmSpec> arms) {
  config.validate();
  if (arms.empty()) throw std::invalid_argument("policy needs at least one arm");
  for (const auto& a : arms) a.validate();
  BudgetLedger ledger(config.budget, arms);
  auto beliefs = seed_beliefs(arms, config.prior_strength);
  auto models = build_models(arms, config);
  return PolicyState{config, std::move(arms), std::move(beliefs), std::move(models),
                     std::move(ledger), {}, 0, 0};
}

}  // namespace

CokePolicy::CokePolicy(EngineConfig config, std::vector<ArmSpec> arms)
    : state_(make_state(std::move(config), std::move(arms))),
      sampler_rng_(RandomSource::for_stream(state_.config.seed, Stream::ClusterSampler)),
      tiebreak_rng_(RandomSource::for_stream(state_.config.seed, Stream::TieBreak)) {}

const ClusterBelief& CokePolicy::belief(Cluster c) const {
  for (const auto& b : state_.beliefs) {
    if (b.cluster == c) return b;
  }
  throw std::out_of_range("no arms registered in cluster " + std::string(to_string(c)));
}

const ArmModel& CokePolicy::arm(const std::string& arm_id) const {
  for (const auto& m : state_.arms) {
    if (m.id() == arm_id) return m;
  }
  throw std::out_of_range("unknown arm '" + arm_id + "'");
}

Decision CokePolicy::decide(const Question& q) {
  const EngineConfig& cfg = state_.config;
  if (static_cast<std::size_t>(q.embedding.size()) != cfg.d)
    throw DimensionError("question '" + q.id + "' has embedding dimension " +
                         std::to_string(q.embedding.size()) + ", engine expects " +
                         std::to_string(cfg.d));
  const Ablation& ab = cfg.ablation;
  const std::size_t n = state_.arms.size();

  Decision dec;
  dec.iteration = state_.iteration + 1;
  dec.question_id = q.id;
  dec.context = q.embedding;
  dec.scores.resize(n);
  dec.combined.assign(n, 0.0);

  std::vector<double> costs(n), bonus(n);
  bool eligible[kNumClusters] = {false, false};
  for (std::size_t i = 0; i < n; ++i) {
    const ArmModel& m = state_.arms[i];
    costs[i] = unit_cost(m.spec(), q);
    const ArmScore s = m.score(q.embedding, cfg.gamma());
    bonus[i] = s.explore;
    ScoreBreakdown& b = dec.scores[i];
    b.admissible = state_.ledger.admits(m.spec(), costs[i]);
    b.exploit = ab.disable_context ? 0.0 : s.exploit;
    b.explore = ab.disable_context ? 0.0 : s.explore;
    b.regret_penalty = ab.disable_cost_regret ? 0.0 : cfg.lambda * state_.ledger.cost_regret(m.id());
    if (b.admissible) eligible[cluster_index(m.spec().cluster)] = true;
  }

  // Every belief is drawn each iteration, admissible or not, so the sampler
  // stream advances identically across budget settings.
  std::vector<ClusterDraw> draws;
  double theta[kNumClusters] = {0.0, 0.0};
  for (const auto& b : state_.beliefs) {
    const double t = sample_theta(b, sampler_rng_);
    theta[cluster_index(b.cluster)] = t;
    if (eligible[cluster_index(b.cluster)]) {
      draws.push_back({b.cluster, t});
      dec.theta_samples[b.cluster] = t;
    }
  }
  if (draws.empty()) throw NoAdmissibleArm("no admissible arm for question '" + q.id + "'");

  std::vector<std::size_t> candidates;
  if (cfg.combine_mode == CombineMode::TwoStage) {
    Cluster chosen;
    if (ab.disable_cluster) {
      chosen = draws[sampler_rng_.index(draws.size())].cluster;
    } else {
      chosen = pick_cluster(draws);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const ScoreBreakdown& b = dec.scores[i];
      dec.combined[i] = b.exploit + b.explore - b.regret_penalty;
      if (b.admissible && state_.arms[i].spec().cluster == chosen) candidates.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const ScoreBreakdown& b = dec.scores[i];
      const double cluster_term =
          ab.disable_cluster ? 0.0 : theta[cluster_index(state_.arms[i].spec().cluster)];
      dec.combined[i] = cluster_term + b.exploit + b.explore - b.regret_penalty;
      if (b.admissible) candidates.push_back(i);
    }
  }

  std::vector<double> candidate_scores;
  candidate_scores.reserve(candidates.size());
  for (std::size_t i : candidates) candidate_scores.push_back(dec.combined[i]);
  const std::size_t pick = candidates[select_arm(candidate_scores, tiebreak_rng_)];

  dec.chosen_index = pick;
  dec.chosen_arm = state_.arms[pick].id();
  dec.chosen_cluster = state_.arms[pick].spec().cluster;
  dec.cost = costs[pick];
  dec.radius = bonus[pick];
  return dec;
}

void CokePolicy::observe(const Decision& dec, int reward) {
  if (reward != 0 && reward != 1) throw std::invalid_argument("observe: reward must be 0 or 1");
  if (dec.iteration != state_.iteration + 1 || dec.chosen_index >= state_.arms.size())
    throw std::logic_error("observe: decision does not belong to the current iteration");

  state_.ledger.charge(dec.chosen_arm, dec.cost, reward == 1);
  for (auto& b : state_.beliefs) {
    if (b.cluster == dec.chosen_cluster) b = update_posterior(b, reward);
  }
  state_.arms[dec.chosen_index].update(dec.context, static_cast<double>(reward));

  HistoryRecord rec;
  rec.iteration = dec.iteration;
  rec.question_id = dec.question_id;
  rec.theta_samples = dec.theta_samples;
  rec.chosen_cluster = dec.chosen_cluster;
  for (std::size_t i = 0; i < dec.scores.size(); ++i)
    rec.per_arm_scores[state_.arms[i].id()] = dec.scores[i];
  rec.chosen_arm = dec.chosen_arm;
  rec.reward = reward;
  rec.cost_charged = dec.cost;
  rec.budget_remaining = state_.ledger.remaining();
  state_.history.push_back(std::move(rec));
  ++state_.iteration;
}

// -- Checkpoints ----------------------------------------------------------------

json CokePolicy::checkpoint() const {
  json beliefs = json::array();
  for (const auto& b : state_.beliefs) {
    beliefs.push_back({{"cluster", to_string(b.cluster)},
                       {"alpha", b.alpha},
                       {"beta", b.beta},
                       {"alpha0", b.alpha0},
                       {"beta0", b.beta0},
                       {"pulls", b.pulls}});
  }
  json arms = json::array();
  for (const auto& m : state_.arms) {
    const auto d = static_cast<Eigen::Index>(m.dim());
    std::vector<double> gram;
    gram.reserve(d * d);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) gram.push_back(m.gram()(r, c));
    std::vector<double> resp(m.response().data(), m.response().data() + d);
    arms.push_back({{"arm_id", m.id()},
                    {"sigma", m.sigma()},
                    {"gram", gram},
                    {"response", resp},
                    {"pulls", m.pulls()}});
  }
  return json{{"schema", 1},
              {"config", to_json(state_.config)},
              {"beliefs", beliefs},
              {"arms", arms},
              {"ledger", state_.ledger.snapshot()},
              {"iteration", state_.iteration},
              {"rng", {{"sampler", sampler_rng_.state()}, {"tiebreak", tiebreak_rng_.state()}}}};
}

CokePolicy CokePolicy::from_checkpoint(const json& j, std::vector<ArmSpec> arms) {
  try {
    if (j.at("schema") != 1) throw DataError("unsupported checkpoint schema");
    CokePolicy p(new_engine_config(j.at("config")), arms);
    for (const auto& jb : j.at("beliefs")) {
      const Cluster c = parse_cluster(jb.at("cluster").get<std::string>());
      auto it = std::find_if(p.state_.beliefs.begin(), p.state_.beliefs.end(),
                             [c](const ClusterBelief& b) { return b.cluster == c; });
      if (it == p.state_.beliefs.end()) throw DataError("checkpoint belief for empty cluster");
      it->alpha = jb.at("alpha").get<double>();
      it->beta = jb.at("beta").get<double>();
      it->alpha0 = jb.at("alpha0").get<double>();
      it->beta0 = jb.at("beta0").get<double>();
      it->pulls = jb.at("pulls").get<std::uint64_t>();
    }
    const auto d = static_cast<Eigen::Index>(p.state_.config.d);
    const auto& jarms = j.at("arms");
    if (jarms.size() != p.state_.arms.size()) throw DataError("checkpoint arm count differs from registry");
    for (std::size_t i = 0; i < jarms.size(); ++i) {
      const auto& ja = jarms[i];
      const ArmSpec& spec = p.state_.specs[i];
      if (ja.at("arm_id").get<std::string>() != spec.arm_id)
        throw DataError("checkpoint arm order differs from registry at '" + spec.arm_id + "'");
      const auto flat = ja.at("gram").get<std::vector<double>>();
      const auto resp = ja.at("response").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(flat.size()) != d * d || static_cast<Eigen::Index>(resp.size()) != d)
        throw DataError("checkpoint arm '" + spec.arm_id + "' has wrong dimensions");
      Eigen::MatrixXd gram(d, d);
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) gram(r, c) = flat[r * d + c];
      Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(resp.data(), d);
      p.state_.arms[i] = ArmModel::restore(spec, ja.at("sigma").get<double>(), std::move(gram),
                                           std::move(b), ja.at("pulls").get<std::uint64_t>());
    }
    p.state_.ledger = BudgetLedger::from_snapshot(j.at("ledger"), p.state_.specs);
    p.state_.iteration = j.at("iteration").get<std::uint64_t>();
    p.state_.resumed_at = p.state_.iteration;
    p.sampler_rng_.restore_state(j.at("rng").at("sampler").get<std::string>());
    p.tiebreak_rng_.restore_state(j.at("rng").at("tiebreak").get<std::string>());
    return p;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace coke
