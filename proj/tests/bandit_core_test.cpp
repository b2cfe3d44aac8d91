#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "coke/config.hpp"
#include "coke/random.hpp"
#include "coke/registry.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace coke;
using nlohmann::json;

TEST_CASE("config: delta 2 gives gamma 1") {
  const auto cfg = new_engine_config({{"d", 4}, {"budget", 1.0}, {"delta", 2}});
  CHECK(cfg.gamma() == 1.0);
}

TEST_CASE("config: delta 0.1 gives the frozen gamma") {
  const auto cfg = new_engine_config({{"d", 4}, {"budget", 1.0}, {"delta", 0.1}});
  CHECK(cfg.gamma() == doctest::Approx(oracle::kGammaDelta01).epsilon(1e-15));
}

TEST_CASE("config: delta outside (0,2] is rejected") {
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", 1.0}, {"delta", 3}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", 1.0}, {"delta", 0}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", 1.0}, {"delta", -0.5}}), ConfigError);
}

TEST_CASE("config: defaults") {
  const auto cfg = new_engine_config({{"d", 16}, {"budget", 2.5}});
  CHECK(cfg.sigma == 1.0);
  CHECK(cfg.delta == 0.1);
  CHECK(cfg.lambda == 1.0);
  CHECK(cfg.prior_strength == 10.0);
  CHECK(cfg.combine_mode == CombineMode::TwoStage);
  CHECK_FALSE(cfg.ablation.disable_cluster);
}

TEST_CASE("config: required keys and ranges") {
  CHECK_THROWS_AS(new_engine_config({{"budget", 1.0}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 0}, {"budget", 1.0}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", -3}, {"budget", 1.0}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", -1.0}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", 1.0}, {"sigma", 0.0}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", 1.0}, {"lamda", 1.0}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", 1.0}, {"schema", 2}}), ConfigError);
  CHECK_THROWS_AS(new_engine_config({{"d", 4}, {"budget", 1.0}, {"ablation", {"disable_everything"}}}),
                  ConfigError);
}

TEST_CASE("config: serialized form round-trips") {
  RandomSource rng(11);
  for (int t = 0; t < 200; ++t) {
    json raw = {{"d", 1 + rng.index(64)},
                {"budget", rng.uniform() * 10.0},
                {"lambda", rng.uniform() * 100.0},
                {"sigma", 0.01 + rng.uniform()},
                {"delta", 0.001 + 1.999 * rng.uniform()},
                {"prior_strength", 0.5 + 20.0 * rng.uniform()},
                {"seed", rng.engine()()},
                {"combine_mode", rng.uniform() < 0.5 ? "two_stage" : "additive"}};
    json flags = json::array();
    if (rng.uniform() < 0.5) flags.push_back("disable_cluster");
    if (rng.uniform() < 0.5) flags.push_back("disable_context");
    if (rng.uniform() < 0.5) flags.push_back("disable_cost_regret");
    raw["ablation"] = flags;
    const auto cfg = new_engine_config(raw);
    const auto again = new_engine_config(json::parse(to_json(cfg).dump()));
    CHECK(again == cfg);
    CHECK(again.gamma() == cfg.gamma());
  }
}

TEST_CASE("rng: equal seeds give identical draws") {
  RandomSource a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("rng: different seeds differ on the first draw") {
  RandomSource a(42), b(43);
  CHECK(a.uniform() != b.uniform());
}

TEST_CASE("rng: uniform mean") {
  RandomSource rng(5);
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  CHECK(std::abs(s / 100000 - 0.5) < 0.01);
}

TEST_CASE("rng: streams are independent of each other") {
  CHECK(stream_seed(42, 1) != stream_seed(42, 2));
  CHECK(stream_seed(42, 1) != stream_seed(43, 1));
  auto a = RandomSource::for_stream(9, Stream::ClusterSampler);
  auto b = RandomSource::for_stream(9, Stream::Synthetic);
  auto c = RandomSource::for_stream(9, Stream::ClusterSampler);
  for (int i = 0; i < 50; ++i) b.uniform();
  CHECK(a.uniform() == c.uniform());
}

TEST_CASE("rng: state restores mid-stream") {
  RandomSource a(77);
  for (int i = 0; i < 33; ++i) a.normal();
  RandomSource b(0);
  b.restore_state(a.state());
  for (int i = 0; i < 20; ++i) CHECK(a.gamma(2.5) == b.gamma(2.5));
}

TEST_CASE("registry: fixture loads") {
  const auto arms = load_arm_registry(testing::fixture("arms.json"));
  REQUIRE(arms.size() == 3);
  CHECK(arms[0].arm_id == "HamQA");
  CHECK(arms[0].cluster == Cluster::KGM);
  CHECK(arms[0].cost_mode == CostMode::PerCall);
  CHECK(arms[2].unit_price == 3e-5);
}

TEST_CASE("registry: bare array and round trip") {
  const auto arms = testing::csqa_arms();
  const json doc = registry_to_json(arms);
  CHECK(doc.at("schema") == 1);
  const auto back = parse_arm_registry(doc);
  REQUIRE(back.size() == arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    CHECK(back[i].arm_id == arms[i].arm_id);
    CHECK(back[i].unit_price == arms[i].unit_price);
    CHECK(back[i].reported_accuracy == arms[i].reported_accuracy);
  }
  CHECK(parse_arm_registry(doc.at("arms")).size() == 3);
}

TEST_CASE("registry: bad entries") {
  const json good = {{"arm_id", "a"}, {"cluster", "LLM"}, {"unit_price", 1.0},
                     {"reported_accuracy", 0.5}, {"cost_mode", "per_call"}};
  CHECK_THROWS_AS(parse_arm_registry(json::array()), DataError);
  CHECK_THROWS_AS(parse_arm_registry(json::array({good, good})), DataError);
  auto bad = good;
  bad["unit_price"] = -1.0;
  CHECK_THROWS_AS(parse_arm_registry(json::array({bad})), DataError);
  bad = good;
  bad["reported_accuracy"] = 1.5;
  CHECK_THROWS_AS(parse_arm_registry(json::array({bad})), DataError);
  bad = good;
  bad["cluster"] = "GNN";
  CHECK_THROWS_AS(parse_arm_registry(json::array({bad})), DataError);
  bad = good;
  bad["colour"] = "red";
  CHECK_THROWS_AS(parse_arm_registry(json::array({bad})), DataError);
  bad = good;
  bad.erase("cost_mode");
  CHECK_THROWS_AS(parse_arm_registry(json::array({bad})), DataError);
  CHECK_THROWS_AS(load_arm_registry(testing::fixture("does-not-exist.json")), DataError);
}

TEST_CASE("question: outcome lookup") {
  auto q = testing::question("q", testing::unit(2, 0), 10, {{"a", 1}});
  CHECK(q.outcome("a") == 1);
  CHECK_THROWS_AS(q.outcome("b"), DataError);
}
