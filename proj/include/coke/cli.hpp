#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace coke::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2 };

struct Invocation {
  std::string arms;
  std::string data;
  std::string config;
  std::string out;
  std::string spec;
  std::string policy;
  std::string axis;
  std::string history;
  std::string regret_csv;
  std::string heatmap_csv;
  std::string checkpoint;
  std::string json_out;
  std::string arms_out;
  std::string reference;
  std::optional<std::uint64_t> seed;
  std::optional<double> budget_fraction;
  std::size_t interval = 250;
  std::size_t threads = 0;
  bool preserve_order = false;
};

// Registers every subcommand and flag on app, binding into inv.
void build_app(CLI::App& app, Invocation& inv);

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_main(int argc, char** argv);

}  // namespace coke::cli
