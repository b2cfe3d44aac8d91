#include "coke/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coke/config.hpp"
#include "coke/dataset.hpp"
#include "coke/harness.hpp"
#include "coke/registry.hpp"
#include "coke/synthetic.hpp"

namespace coke::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_seed(CLI::App* sub, Invocation& inv) {
  sub->add_option("--seed", inv.seed, "Random seed; overrides the config seed")
      ->envname("COKE_SEED");
}

void add_replay_flags(CLI::App* sub, Invocation& inv) {
  sub->add_flag("--preserve-order", inv.preserve_order,
                "Replay questions in file order instead of a seed-shuffled order");
  sub->add_option("--reference", inv.reference,
                  "Arm used for accuracy delta and cost saving (default: most expensive arm)");
  sub->add_option("--interval", inv.interval, "Iteration interval width for the selection heatmap")
      ->check(CLI::PositiveNumber);
}

}  // namespace

void build_app(CLI::App& app, Invocation& inv) {
  app.description("Cost-aware LLM/KGM arm selection: replay runs, baselines, sweeps and synthetic data.");
  app.require_subcommand(1, 1);

  auto* run = app.add_subcommand("run", "Replay the selection policy over a dataset");
  run->add_option("--arms", inv.arms, "Arm registry JSON")->required();
  run->add_option("--data", inv.data, "Replay dataset JSONL")->required();
  run->add_option("--config", inv.config, "Engine config JSON")->required();
  run->add_option("--out", inv.out, "Run result JSON output path")->required();
  run->add_option("--budget-fraction", inv.budget_fraction,
                  "Set the budget to this fraction of the all-questions cost of the most expensive arm")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--history", inv.history, "Write the per-iteration history as JSONL");
  run->add_option("--checkpoint", inv.checkpoint, "Write the final engine checkpoint JSON");
  run->add_option("--regret-csv", inv.regret_csv, "Write the cumulative selection-regret curve as CSV");
  run->add_option("--heatmap-csv", inv.heatmap_csv, "Write per-interval selection counts as CSV");
  add_replay_flags(run, inv);
  add_seed(run, inv);

  auto* baseline = app.add_subcommand("baseline", "Replay a fixed baseline policy over a dataset");
  baseline->add_option("--arms", inv.arms, "Arm registry JSON")->required();
  baseline->add_option("--data", inv.data, "Replay dataset JSONL")->required();
  baseline->add_option("--policy", inv.policy, "Baseline: always:<arm>, random or oracle")->required();
  baseline->add_option("--out", inv.out, "Run result JSON output path")->required();
  baseline->add_option("--regret-csv", inv.regret_csv, "Write the cumulative selection-regret curve as CSV");
  baseline->add_option("--heatmap-csv", inv.heatmap_csv, "Write per-interval selection counts as CSV");
  add_replay_flags(baseline, inv);
  add_seed(baseline, inv);

  auto* sweep = app.add_subcommand("sweep", "Run the policy once per budget or lambda value");
  sweep->add_option("--arms", inv.arms, "Arm registry JSON")->required();
  sweep->add_option("--data", inv.data, "Replay dataset JSONL")->required();
  sweep->add_option("--config", inv.config, "Base engine config JSON")->required();
  sweep->add_option("--axis", inv.axis,
                    "Sweep axis: budget=start:stop:step, budget=v1,v2,... or lambda=v1,v2,...")
      ->required();
  sweep->add_option("--out", inv.out, "Sweep table CSV output path")->required();
  sweep->add_option("--json", inv.json_out, "Also write every run result as a JSON array");
  sweep->add_option("--threads", inv.threads, "Worker threads for sweep points (0: all cores)");
  add_replay_flags(sweep, inv);
  add_seed(sweep, inv);

  auto* generate = app.add_subcommand("generate", "Generate a synthetic replay dataset");
  generate->add_option("--spec", inv.spec, "Synthetic world spec JSON")->required();
  generate->add_option("--out", inv.out, "Dataset JSONL output path")->required();
  generate->add_option("--arms-out", inv.arms_out, "Also write the arm registry carried by the spec");
  add_seed(generate, inv);

  auto* validate = app.add_subcommand("validate", "Schema-check a dataset (and optionally a registry)");
  validate->add_option("--data", inv.data, "Replay dataset JSONL")->required();
  validate->add_option("--arms", inv.arms, "Arm registry JSON to check the dataset against");
  add_seed(validate, inv);
}

namespace {

void require_readable(const std::string& path, const char* flag) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw DataError(std::string("cannot read ") + flag + " '" + path + "'");
}

template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  fn(out);
}

RunOptions replay_options(const Invocation& inv) {
  RunOptions o;
  o.preserve_order = inv.preserve_order;
  o.interval = inv.interval;
  if (!inv.reference.empty()) o.reference_arm = inv.reference;
  o.threads = inv.threads;
  return o;
}

void log_marginals(const ReplayDataset& ds, std::ostream& err) {
  err << "loaded " << ds.size() << " questions (d = " << ds.d << ") from " << ds.name << '\n';
  for (const auto& [arm, acc] : ds.marginal_accuracy()) err << "  marginal accuracy " << arm << ": " << acc << '\n';
}

EngineConfig load_config(const Invocation& inv) {
  EngineConfig cfg = load_engine_config(inv.config);
  if (inv.seed) cfg.seed = *inv.seed;
  return cfg;
}

int cmd_run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  for (auto [p, f] : {std::pair{&inv.arms, "--arms"}, {&inv.data, "--data"}, {&inv.config, "--config"}})
    require_readable(*p, f);
  const auto arms = load_arm_registry(inv.arms);
  const auto ds = load_dataset(inv.data);
  log_marginals(ds, err);
  EngineConfig cfg = load_config(inv);
  if (inv.budget_fraction) {
    cfg.budget = *inv.budget_fraction * always_arm_cost(ds, most_expensive_arm(ds, arms));
    cfg.validate();
  }
  std::vector<HistoryRecord> history;
  nlohmann::json checkpoint;
  const RunResult r = run_policy(ds, arms, cfg, replay_options(inv), &history, &checkpoint);
  write_file(inv.out, [&](std::ostream& o) { o << r.to_json().dump(2) << '\n'; });
  write_file(inv.history, [&](std::ostream& o) { write_history_jsonl(o, history); });
  write_file(inv.checkpoint, [&](std::ostream& o) { o << checkpoint.dump(2) << '\n'; });
  write_file(inv.regret_csv, [&](std::ostream& o) { write_regret_csv(o, r); });
  write_file(inv.heatmap_csv, [&](std::ostream& o) { write_heatmap_csv(o, r); });
  print_summary(out, {r});
  return kOk;
}

int cmd_baseline(const Invocation& inv, std::ostream& out, std::ostream& err) {
  require_readable(inv.arms, "--arms");
  require_readable(inv.data, "--data");
  Baseline b;
  try {
    b = Baseline::parse(inv.policy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto arms = load_arm_registry(inv.arms);
  const auto ds = load_dataset(inv.data);
  log_marginals(ds, err);
  const RunResult r = run_baseline(ds, arms, b, inv.seed.value_or(0), replay_options(inv));
  write_file(inv.out, [&](std::ostream& o) { o << r.to_json().dump(2) << '\n'; });
  write_file(inv.regret_csv, [&](std::ostream& o) { write_regret_csv(o, r); });
  write_file(inv.heatmap_csv, [&](std::ostream& o) { write_heatmap_csv(o, r); });
  print_summary(out, {r});
  return kOk;
}

int cmd_sweep(const Invocation& inv, std::ostream& out, std::ostream& err) {
  SweepAxis axis;
  try {
    axis = SweepAxis::parse(inv.axis);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--axis: ") + e.what());
  }
  for (auto [p, f] : {std::pair{&inv.arms, "--arms"}, {&inv.data, "--data"}, {&inv.config, "--config"}})
    require_readable(*p, f);
  const auto arms = load_arm_registry(inv.arms);
  const auto ds = load_dataset(inv.data);
  log_marginals(ds, err);
  const EngineConfig cfg = load_config(inv);
  const auto results = sweep(ds, arms, cfg, axis, replay_options(inv));
  write_file(inv.out, [&](std::ostream& o) { write_sweep_csv(o, axis, results); });
  write_file(inv.json_out, [&](std::ostream& o) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : results) all.push_back(r.to_json());
    o << all.dump(2) << '\n';
  });
  write_sweep_csv(out, axis, results);
  return kOk;
}

int cmd_generate(const Invocation& inv, std::ostream& out, std::ostream&) {
  require_readable(inv.spec, "--spec");
  std::ifstream in(inv.spec);
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("--spec '" + inv.spec + "' is not valid JSON: " + e.what());
  }
  SyntheticSpec spec = synthetic_spec_from_json(raw);
  if (inv.seed) spec.seed = *inv.seed;
  const ReplayDataset ds = generate_synthetic(spec);
  save_dataset(inv.out, ds);
  if (!inv.arms_out.empty()) {
    const auto arms = synthetic_registry(spec);
    if (arms.size() != spec.arms.size())
      throw DataError("--arms-out needs cluster, unit_price and cost_mode on every spec arm");
    write_file(inv.arms_out, [&](std::ostream& o) { o << registry_to_json(arms).dump(2) << '\n'; });
  }
  out << "wrote " << ds.size() << " questions (d = " << ds.d << ") to " << inv.out << '\n';
  for (const auto& [arm, acc] : ds.marginal_accuracy()) out << "  " << arm << ": " << acc << '\n';
  return kOk;
}

int cmd_validate(const Invocation& inv, std::ostream& out, std::ostream&) {
  require_readable(inv.data, "--data");
  require_readable(inv.arms, "--arms");
  const auto ds = load_dataset(inv.data);
  if (!inv.arms.empty()) check_against_registry(ds, load_arm_registry(inv.arms));
  out << "ok: " << ds.size() << " questions, d = " << ds.d << ", arms:";
  for (const auto& a : ds.arm_ids) out << ' ' << a;
  out << '\n';
  return kOk;
}

}  // namespace

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"coke"};
  Invocation inv;
  build_app(app, inv);
  std::vector<const char*> argv;
  argv.push_back("coke");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "coke: error: " << e.what() << '\n';
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsageError;
  }
  try {
    if (app.got_subcommand("run")) return cmd_run(inv, out, err);
    if (app.got_subcommand("baseline")) return cmd_baseline(inv, out, err);
    if (app.got_subcommand("sweep")) return cmd_sweep(inv, out, err);
    if (app.got_subcommand("generate")) return cmd_generate(inv, out, err);
    if (app.got_subcommand("validate")) return cmd_validate(inv, out, err);
  } catch (const UsageError& e) {
    err << "coke: error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "coke: error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_main(args, std::cout, std::cerr);
}

}  // namespace coke::cli
