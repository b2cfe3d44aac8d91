#include "coke/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "coke/types.hpp"

namespace coke {

using nlohmann::json;

std::string_view to_string(CombineMode m) {
  return m == CombineMode::TwoStage ? "two_stage" : "additive";
}

CombineMode parse_combine_mode(std::string_view s) {
  if (s == "two_stage" || s == "TwoStage") return CombineMode::TwoStage;
  if (s == "additive" || s == "Additive") return CombineMode::Additive;
  throw ConfigError("unknown combine_mode '" + std::string(s) + "' (expected two_stage or additive)");
}

double confidence_gamma(double delta) {
  if (!(delta > 0.0 && delta <= 2.0))
    throw ConfigError("delta must lie in (0, 2]; got " + std::to_string(delta));
  return 1.0 + std::sqrt(std::log(2.0 / delta) / 2.0);
}

void EngineConfig::validate() {
  if (d == 0) throw ConfigError("d must be a positive dimension");
  auto finite = [](double v, const char* name) {
    if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
  };
  finite(lambda, "lambda");
  finite(sigma, "sigma");
  finite(delta, "delta");
  finite(budget, "budget");
  finite(prior_strength, "prior_strength");
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (sigma <= 0.0) throw ConfigError("sigma must be > 0");
  if (budget < 0.0) throw ConfigError("budget must be >= 0");
  if (prior_strength <= 0.0) throw ConfigError("prior_strength must be > 0");
  gamma_ = confidence_gamma(delta);
}

bool EngineConfig::operator==(const EngineConfig& o) const {
  return d == o.d && lambda == o.lambda && sigma == o.sigma && delta == o.delta &&
         budget == o.budget && prior_strength == o.prior_strength && seed == o.seed &&
         ablation == o.ablation && combine_mode == o.combine_mode;
}

namespace {

const std::set<std::string> kKnownKeys = {"schema", "d",     "lambda",   "sigma",
                                          "delta",  "budget", "prior_strength", "seed",
                                          "ablation", "combine_mode"};

double number(const json& raw, const char* key) {
  const auto& v = raw.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

EngineConfig new_engine_config(const json& raw) {
  if (!raw.is_object()) throw ConfigError("engine config must be a JSON object");
  for (const auto& [key, _] : raw.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  if (raw.contains("schema") && raw.at("schema") != kConfigSchema)
    throw ConfigError("unsupported config schema " + raw.at("schema").dump() + " (expected 1)");
  for (const char* key : {"d", "budget"}) {
    if (!raw.contains(key)) throw ConfigError(std::string("missing required config key '") + key + "'");
  }

  EngineConfig cfg;
  const auto& d = raw.at("d");
  if (!d.is_number_integer() || d.get<std::int64_t>() <= 0)
    throw ConfigError("d must be a positive integer");
  cfg.d = d.get<std::size_t>();
  cfg.budget = number(raw, "budget");
  if (raw.contains("lambda")) cfg.lambda = number(raw, "lambda");
  if (raw.contains("sigma")) cfg.sigma = number(raw, "sigma");
  if (raw.contains("delta")) cfg.delta = number(raw, "delta");
  if (raw.contains("prior_strength")) cfg.prior_strength = number(raw, "prior_strength");
  if (raw.contains("seed")) {
    const auto& s = raw.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ConfigError("seed must be a nonnegative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (raw.contains("combine_mode")) {
    if (!raw.at("combine_mode").is_string()) throw ConfigError("combine_mode must be a string");
    cfg.combine_mode = parse_combine_mode(raw.at("combine_mode").get<std::string>());
  }
  if (raw.contains("ablation")) {
    const auto& flags = raw.at("ablation");
    if (!flags.is_array()) throw ConfigError("ablation must be an array of flag names");
    for (const auto& f : flags) {
      const std::string name = f.is_string() ? f.get<std::string>() : f.dump();
      if (name == "disable_cluster") cfg.ablation.disable_cluster = true;
      else if (name == "disable_context") cfg.ablation.disable_context = true;
      else if (name == "disable_cost_regret") cfg.ablation.disable_cost_regret = true;
      else throw ConfigError("unknown ablation flag '" + name + "'");
    }
  }
  cfg.validate();
  return cfg;
}

json to_json(const EngineConfig& cfg) {
  json flags = json::array();
  if (cfg.ablation.disable_cluster) flags.push_back("disable_cluster");
  if (cfg.ablation.disable_context) flags.push_back("disable_context");
  if (cfg.ablation.disable_cost_regret) flags.push_back("disable_cost_regret");
  return json{{"schema", kConfigSchema},
              {"d", cfg.d},
              {"lambda", cfg.lambda},
              {"sigma", cfg.sigma},
              {"delta", cfg.delta},
              {"budget", cfg.budget},
              {"prior_strength", cfg.prior_strength},
              {"seed", cfg.seed},
              {"ablation", flags},
              {"combine_mode", to_string(cfg.combine_mode)}};
}

EngineConfig load_engine_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  json raw;
  try {
    raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return new_engine_config(raw);
}

}  // namespace coke
