#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "coke/harness.hpp"

namespace coke {

using nlohmann::json;

json RunResult::to_json() const {
  json curve = json::array();
  for (const auto& [k, sr] : regret_curve) curve.push_back({k, sr});
  json heat = json::array();
  for (const auto& row : interval_heatmap)
    heat.push_back({{"start", row.start}, {"end", row.end}, {"counts", row.counts}});
  return json{{"config", config},
              {"policy", policy},
              {"questions", questions},
              {"accuracy", accuracy},
              {"error_rate", error_rate()},
              {"total_cost_dollars", total_cost_dollars},
              {"total_llm_calls", total_llm_calls},
              {"total_calls", total_calls},
              {"reference_arm", reference_arm},
              {"reference_accuracy", reference_accuracy},
              {"reference_cost", reference_cost},
              {"accuracy_delta_vs_reference", accuracy_delta_vs_reference()},
              {"cost_saving_vs_reference", cost_saving_vs_reference},
              {"budget", budget},
              {"max_llm_spend", max_llm_spend},
              {"per_arm_selection_counts", per_arm_selection_counts},
              {"ledger", ledger},
              {"regret_curve", curve},
              {"regret_bound_rhs", regret_bound_rhs},
              {"regret_bound_holds", regret_bound_holds},
              {"interval_heatmap", heat}};
}

Baseline Baseline::parse(const std::string& text) {
  if (text == "random") return {Kind::Random, {}};
  if (text == "oracle") return {Kind::OracleBest, {}};
  if (text.rfind("always:", 0) == 0 && text.size() > 7) return {Kind::AlwaysArm, text.substr(7)};
  throw std::invalid_argument("unknown baseline '" + text + "' (expected always:<arm>, random or oracle)");
}

std::string Baseline::name() const {
  switch (kind) {
    case Kind::AlwaysArm: return "always:" + arm_id;
    case Kind::Random: return "random";
    case Kind::OracleBest: return "oracle";
  }
  return "?";
}

namespace {

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v))
    throw std::invalid_argument("'" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  for (std::string p; std::getline(in, p, sep);) parts.push_back(p);
  return parts;
}

}  // namespace

SweepAxis SweepAxis::parse(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("sweep axis must look like budget=... or lambda=...");
  SweepAxis axis;
  const std::string key = text.substr(0, eq), spec = text.substr(eq + 1);
  if (key == "budget") axis.kind = Kind::Budget;
  else if (key == "lambda") axis.kind = Kind::Lambda;
  else throw std::invalid_argument("unknown sweep axis '" + key + "' (expected budget or lambda)");

  const auto range = split(spec, ':');
  if (range.size() == 3) {
    const double start = parse_number(range[0]), stop = parse_number(range[1]), step = parse_number(range[2]);
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("range needs step > 0 and stop >= start");
    // Integer stepping avoids accumulated drift; values snap to 1e-12.
    for (std::size_t i = 0;; ++i) {
      const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
      if (v > stop + 1e-9) break;
      axis.values.push_back(v);
    }
  } else if (range.size() == 1) {
    for (const auto& p : split(spec, ',')) axis.values.push_back(parse_number(p));
  } else {
    throw std::invalid_argument("range must be start:stop:step");
  }
  if (axis.values.empty()) throw std::invalid_argument("sweep axis has no values");
  for (double v : axis.values) {
    if (v < 0.0) throw std::invalid_argument("sweep values must be >= 0");
  }
  return axis;
}

void write_sweep_csv(std::ostream& out, const SweepAxis& axis, const std::vector<RunResult>& results) {
  out << "axis_value,accuracy,error_rate,cost_dollars,llm_calls,saving_fraction\n";
  char line[256];
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RunResult& r = results[i];
    std::snprintf(line, sizeof line, "%.12g,%.6f,%.6f,%.9g,%llu,%.6f\n", axis.values.at(i), r.accuracy,
                  r.error_rate(), r.total_cost_dollars, static_cast<unsigned long long>(r.total_llm_calls),
                  r.cost_saving_vs_reference);
    out << line;
  }
}

void write_regret_csv(std::ostream& out, const RunResult& result) {
  out << "k,cumulative_sr\n";
  for (const auto& [k, sr] : result.regret_curve) out << k << ',' << sr << '\n';
}

void write_heatmap_csv(std::ostream& out, const RunResult& result) {
  out << "start,end";
  if (!result.interval_heatmap.empty())
    for (const auto& [arm, _] : result.interval_heatmap.front().counts) out << ',' << arm;
  out << '\n';
  for (const auto& row : result.interval_heatmap) {
    out << row.start << ',' << row.end;
    for (const auto& [_, c] : row.counts) out << ',' << c;
    out << '\n';
  }
}

void print_summary(std::ostream& out, const std::vector<RunResult>& results) {
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %9s %12s %14s %12s %10s\n", "policy", "accuracy", "acc vs ref",
                "cost ($)", "saving", "llm calls");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-24s %9.4f %+11.2f%% %14.6f %+11.2f%% %10llu\n", r.policy.c_str(),
                  r.accuracy,
                  r.reference_accuracy > 0 ? 100.0 * r.accuracy_delta_vs_reference() / r.reference_accuracy
                                           : 0.0,
                  r.total_cost_dollars, 100.0 * r.cost_saving_vs_reference,
                  static_cast<unsigned long long>(r.total_llm_calls));
    out << line;
  }
  if (!results.empty()) out << "reference arm: " << results.front().reference_arm << '\n';
}

}  // namespace coke
