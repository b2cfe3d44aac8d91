#include "coke/synthetic.hpp"

#include <cmath>
#include <set>

#include "coke/random.hpp"
#include "coke/registry.hpp"

namespace coke {

using nlohmann::json;

void SyntheticSpec::validate() const {
  if (n == 0) throw ConfigError("synthetic spec: n must be positive");
  if (d == 0) throw ConfigError("synthetic spec: d must be positive");
  if (arms.empty()) throw ConfigError("synthetic spec: at least one arm is required");
  const std::size_t k = topics ? topics : arms.size();
  if (structure == ExpertStructure::Orthogonal && k > d)
    throw ConfigError("synthetic spec: orthogonal structure needs topics <= d");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("synthetic spec: noise must be >= 0");
  if (!std::isfinite(sharpness)) throw ConfigError("synthetic spec: sharpness must be finite");
  if (token_min < 1 || token_max < token_min)
    throw ConfigError("synthetic spec: need 1 <= token_min <= token_max");
  std::set<std::string> ids;
  for (const auto& a : arms) {
    if (!(a.target_accuracy > 0.0 && a.target_accuracy < 1.0))
      throw ConfigError("synthetic spec: target accuracy for '" + a.arm_id + "' must lie in (0, 1)");
    if (a.expert_topic && *a.expert_topic >= k)
      throw ConfigError("synthetic spec: expert_topic for '" + a.arm_id + "' out of range");
    if (!ids.insert(a.arm_id).second) throw ConfigError("synthetic spec: duplicate arm '" + a.arm_id + "'");
  }
}

SyntheticSpec synthetic_spec_from_json(const json& j) {
  try {
    SyntheticSpec s;
    static const std::set<std::string> known = {"schema", "name", "n", "d", "topics", "noise", "sharpness",
                                                "token_min", "token_max", "seed", "expert_structure", "arms"};
    for (const auto& [key, _] : j.items()) {
      if (!known.count(key)) throw ConfigError("synthetic spec: unknown key '" + key + "'");
    }
    if (j.contains("schema") && j.at("schema") != 1) throw ConfigError("synthetic spec: unsupported schema");
    s.name = j.value("name", s.name);
    s.n = j.at("n").get<std::size_t>();
    s.d = j.at("d").get<std::size_t>();
    s.topics = j.value("topics", std::size_t{0});
    s.noise = j.value("noise", s.noise);
    s.sharpness = j.value("sharpness", s.sharpness);
    s.token_min = j.value("token_min", s.token_min);
    s.token_max = j.value("token_max", s.token_max);
    s.seed = j.value("seed", std::uint64_t{0});
    const std::string structure = j.value("expert_structure", std::string("orthogonal"));
    if (structure == "orthogonal") s.structure = ExpertStructure::Orthogonal;
    else if (structure == "random") s.structure = ExpertStructure::Random;
    else throw ConfigError("synthetic spec: unknown expert_structure '" + structure + "'");
    for (const auto& ja : j.at("arms")) {
      SyntheticArm a;
      a.arm_id = ja.at("arm_id").get<std::string>();
      a.target_accuracy = ja.at("target_accuracy").get<double>();
      if (ja.contains("expert_topic")) a.expert_topic = ja.at("expert_topic").get<std::size_t>();
      if (ja.contains("cluster")) {
        json entry = ja;
        entry.erase("target_accuracy");
        entry.erase("expert_topic");
        if (!entry.contains("reported_accuracy")) entry["reported_accuracy"] = a.target_accuracy;
        a.registry = parse_arm_registry(json::array({entry})).front();
      }
      s.arms.push_back(std::move(a));
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
}

json to_json(const SyntheticSpec& s) {
  json arms = json::array();
  for (const auto& a : s.arms) {
    json ja = a.registry ? to_json(*a.registry) : json{{"arm_id", a.arm_id}};
    ja["target_accuracy"] = a.target_accuracy;
    if (a.expert_topic) ja["expert_topic"] = *a.expert_topic;
    arms.push_back(ja);
  }
  return json{{"schema", 1},
              {"name", s.name},
              {"n", s.n},
              {"d", s.d},
              {"topics", s.topics},
              {"arms", arms},
              {"expert_structure", s.structure == ExpertStructure::Orthogonal ? "orthogonal" : "random"},
              {"noise", s.noise},
              {"sharpness", s.sharpness},
              {"token_min", s.token_min},
              {"token_max", s.token_max},
              {"seed", s.seed}};
}

namespace {

Eigen::VectorXd random_unit(std::size_t d, RandomSource& rng) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = rng.normal();
  return v / v.norm();
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double realised_rate(const std::vector<double>& logits, const std::vector<double>& u, double bias) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) hits += u[i] < sigmoid(logits[i] + bias);
  return static_cast<double>(hits) / static_cast<double>(logits.size());
}

// Smallest bias (to bisection precision) whose realised rate reaches target.
double calibrate_bias(const std::vector<double>& logits, const std::vector<double>& u, double target) {
  double lo = -60.0, hi = 60.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (realised_rate(logits, u, mid) < target) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace

SyntheticWorld generate_world(const SyntheticSpec& spec) {
  spec.validate();
  RandomSource rng = RandomSource::for_stream(spec.seed, Stream::Synthetic);
  const std::size_t k = spec.topics ? spec.topics : spec.arms.size();
  const auto d = static_cast<Eigen::Index>(spec.d);

  std::vector<Eigen::VectorXd> centres(k);
  for (std::size_t t = 0; t < k; ++t) {
    centres[t] = spec.structure == ExpertStructure::Orthogonal
                     ? Eigen::VectorXd::Unit(d, static_cast<Eigen::Index>(t))
                     : random_unit(spec.d, rng);
  }

  SyntheticWorld world;
  for (std::size_t a = 0; a < spec.arms.size(); ++a) {
    const std::size_t topic = spec.arms[a].expert_topic.value_or(a % k);
    world.directions.push_back(spec.structure == ExpertStructure::Orthogonal ? centres[topic]
                                                                             : random_unit(spec.d, rng));
  }

  ReplayDataset& ds = world.dataset;
  ds.name = spec.name;
  ds.d = spec.d;
  for (const auto& a : spec.arms) ds.arm_ids.push_back(a.arm_id);
  const double jitter = spec.noise / std::sqrt(static_cast<double>(spec.d));
  ds.questions.resize(spec.n);
  world.topic_of.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t t = rng.index(k);
    world.topic_of[i] = t;
    Question& q = ds.questions[i];
    q.id = "q" + std::to_string(i);
    q.embedding = centres[t];
    for (auto& x : q.embedding) x += jitter * rng.normal();
    q.token_len = rng.integer(spec.token_min, spec.token_max);
    q.outcomes.emplace();
  }

  for (std::size_t a = 0; a < spec.arms.size(); ++a) {
    std::vector<double> logits(spec.n), u(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      logits[i] = spec.sharpness * world.directions[a].dot(ds.questions[i].embedding);
      u[i] = rng.uniform();
    }
    const double bias = calibrate_bias(logits, u, spec.arms[a].target_accuracy);
    world.biases.push_back(bias);
    for (std::size_t i = 0; i < spec.n; ++i)
      (*ds.questions[i].outcomes)[spec.arms[a].arm_id] = u[i] < sigmoid(logits[i] + bias) ? 1 : 0;
  }
  return world;
}

ReplayDataset generate_synthetic(const SyntheticSpec& spec) { return generate_world(spec).dataset; }

std::vector<ArmSpec> synthetic_registry(const SyntheticSpec& spec) {
  std::vector<ArmSpec> arms;
  for (const auto& a : spec.arms) {
    if (a.registry) arms.push_back(*a.registry);
  }
  return arms;
}

}  // namespace coke
