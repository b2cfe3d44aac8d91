#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "coke/types.hpp"

namespace coke {

inline constexpr int kDatasetSchema = 1;

// Questions with every arm's logged outcome. Line format (JSONL):
//   {"id": str, "embedding": [real x d], "tokens": int, "outcomes": {"<arm>": 0|1}}
// An optional first line {"schema": 1, "name": str, "d": int} is a header.
struct ReplayDataset {
  std::string name;
  std::size_t d = 0;
  std::vector<Question> questions;
  std::vector<std::string> arm_ids;

  std::map<std::string, double> marginal_accuracy() const;
  std::size_t size() const { return questions.size(); }
};

ReplayDataset parse_dataset(std::istream& in, const std::string& name);
ReplayDataset load_dataset(const std::string& path);

void write_dataset(std::ostream& out, const ReplayDataset& ds);
void save_dataset(const std::string& path, const ReplayDataset& ds);

// Every registered arm has an outcome on every question, and d matches.
void check_against_registry(const ReplayDataset& ds, const std::vector<ArmSpec>& arms);

}  // namespace coke
