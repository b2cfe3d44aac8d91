#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coke/cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using coke::cli::run_main;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("coke-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
                                        "-" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kArms = testing::fixture("arms.json");
const std::string kData = testing::fixture("tiny.jsonl");
const std::string kConfig = testing::fixture("config.json");

}  // namespace

TEST_CASE("validate: well-formed fixture") {
  const auto r = cli({"validate", "--data", kData});
  CHECK(r.code == 0);
  CHECK(r.out.find("3 questions") != std::string::npos);
  CHECK(cli({"validate", "--data", kData, "--arms", kArms}).code == 0);
}

TEST_CASE("validate: data errors exit 2") {
  const auto r = cli({"validate", "--data", testing::fixture("missing_outcome.jsonl")});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("coke: error: ", 0) == 0);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(cli({"validate", "--data", testing::fixture("absent.jsonl")}).code == 2);
  CHECK(cli({"validate", "--data", testing::fixture("all_correct_x.jsonl"), "--arms", kArms}).code == 2);
}

TEST_CASE("run: missing --arms is a usage error") {
  TempDir tmp;
  const auto r = cli({"run", "--data", kData, "--config", kConfig, "--out", tmp / "r.json"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--arms") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"validate", "--data", kData, "--bogus"}).code == 1);
  TempDir tmp;
  CHECK(cli({"baseline", "--arms", kArms, "--data", kData, "--policy", "greedy", "--out", tmp / "b.json"}).code == 1);
  CHECK(cli({"sweep", "--arms", kArms, "--data", kData, "--config", kConfig, "--axis", "gamma=1", "--out",
             tmp / "s.csv"})
            .code == 1);
}

TEST_CASE("run: writes every requested artifact") {
  TempDir tmp;
  const auto r = cli({"run", "--arms", kArms, "--data", kData, "--config", kConfig, "--out", tmp / "r.json",
                      "--history", tmp / "h.jsonl", "--checkpoint", tmp / "c.json", "--regret-csv",
                      tmp / "regret.csv", "--heatmap-csv", tmp / "heat.csv", "--interval", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("accuracy") != std::string::npos);
  CHECK(r.out.find("coke") != std::string::npos);
  CHECK(r.err.find("marginal accuracy") != std::string::npos);
  const auto result = nlohmann::json::parse(slurp(tmp / "r.json"));
  CHECK(result.at("questions") == 3);
  CHECK(result.at("config").at("seed") == 7);
  std::ifstream hist(tmp / "h.jsonl");
  int lines = 0;
  for (std::string line; std::getline(hist, line);) ++lines;
  CHECK(lines == 3);
  CHECK(nlohmann::json::parse(slurp(tmp / "c.json")).at("iteration") == 3);
  CHECK(slurp(tmp / "heat.csv").rfind("start,end,", 0) == 0);
  CHECK(slurp(tmp / "regret.csv").rfind("k,cumulative_sr\n", 0) == 0);
}

TEST_CASE("run: --seed overrides the config and output is reproducible") {
  TempDir tmp;
  auto go = [&](const std::string& out, const std::string& seed) {
    return cli({"run", "--arms", kArms, "--data", kData, "--config", kConfig, "--out", tmp / out, "--seed", seed,
                "--budget-fraction", "0.5"})
        .code;
  };
  REQUIRE(go("a.json", "99") == 0);
  REQUIRE(go("b.json", "99") == 0);
  CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));
  const auto j = nlohmann::json::parse(slurp(tmp / "a.json"));
  CHECK(j.at("config").at("seed") == 99);
}

TEST_CASE("baseline: always and oracle") {
  TempDir tmp;
  const auto r = cli({"baseline", "--arms", kArms, "--data", kData, "--policy", "always:GPT-4", "--out",
                      tmp / "b.json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(tmp / "b.json")).at("accuracy") == 1.0);
  CHECK(cli({"baseline", "--arms", kArms, "--data", kData, "--policy", "oracle", "--out", tmp / "o.json"}).code == 0);
  CHECK(cli({"baseline", "--arms", kArms, "--data", kData, "--policy", "always:nope", "--out", tmp / "x.json"})
            .code == 2);
}

TEST_CASE("sweep: lambda axis writes five rows") {
  TempDir tmp;
  const auto r = cli({"sweep", "--arms", kArms, "--data", kData, "--config", kConfig, "--axis",
                      "lambda=0.001,0.1,1,10,100", "--out", tmp / "s.csv", "--json", tmp / "s.json"});
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(tmp / "s.csv"));
  std::vector<std::string> rows;
  for (std::string line; std::getline(csv, line);) rows.push_back(line);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "axis_value,accuracy,error_rate,cost_dollars,llm_calls,saving_fraction");
  CHECK(rows[1].rfind("0.001,", 0) == 0);
  CHECK(nlohmann::json::parse(slurp(tmp / "s.json")).size() == 5);
}

TEST_CASE("generate: spec to dataset and registry") {
  TempDir tmp;
  const auto r = cli({"generate", "--spec", testing::fixture("synthetic_spec.json"), "--out", tmp / "d.jsonl",
                      "--arms-out", tmp / "arms.json"});
  REQUIRE(r.code == 0);
  CHECK(cli({"validate", "--data", tmp / "d.jsonl", "--arms", tmp / "arms.json"}).code == 0);
  REQUIRE(cli({"generate", "--spec", testing::fixture("synthetic_spec.json"), "--out", tmp / "e.jsonl"}).code == 0);
  CHECK(slurp(tmp / "d.jsonl") == slurp(tmp / "e.jsonl"));
  REQUIRE(cli({"generate", "--spec", testing::fixture("synthetic_spec.json"), "--out", tmp / "f.jsonl", "--seed",
               "4"})
              .code == 0);
  CHECK(slurp(tmp / "d.jsonl") != slurp(tmp / "f.jsonl"));
  CHECK(cli({"generate", "--spec", kData, "--out", tmp / "g.jsonl"}).code == 2);
}

TEST_CASE("help: every subcommand documents every flag") {
  CLI::App app{"coke"};
  coke::cli::Invocation inv;
  coke::cli::build_app(app, inv);
  const auto subs = app.get_subcommands([](CLI::App*) { return true; });
  REQUIRE(subs.size() == 5);
  for (CLI::App* sub : subs) {
    const auto r = cli({sub->get_name(), "--help"});
    CHECK(r.code == 0);
    for (const CLI::Option* opt : sub->get_options()) {
      for (const auto& name : opt->get_lnames()) {
        INFO(sub->get_name() << " --" << name);
        CHECK(r.out.find("--" + name) != std::string::npos);
      }
      if (opt->get_name() != "--help") CHECK_FALSE(opt->get_description().empty());
    }
    bool has_seed = false;
    for (const CLI::Option* opt : sub->get_options()) has_seed |= opt->check_lname("seed");
    INFO(sub->get_name());
    CHECK(has_seed);
  }
}
