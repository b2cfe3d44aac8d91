#include "coke/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace coke {

using nlohmann::json;

std::map<std::string, double> ReplayDataset::marginal_accuracy() const {
  std::map<std::string, double> acc;
  for (const auto& arm : arm_ids) acc[arm] = 0.0;
  if (questions.empty()) return acc;
  for (const auto& q : questions)
    for (const auto& [arm, r] : *q.outcomes) acc[arm] += r;
  for (auto& [_, v] : acc) v /= static_cast<double>(questions.size());
  return acc;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw DataError("line " + std::to_string(line) + ": " + msg);
}

Question parse_question(const json& obj, std::size_t line) {
  if (!obj.is_object()) fail(line, "expected a JSON object");
  for (const char* key : {"id", "embedding", "tokens", "outcomes"}) {
    if (!obj.contains(key)) fail(line, std::string("missing field '") + key + "'");
  }
  Question q;
  const auto& id = obj.at("id");
  if (!id.is_string()) fail(line, "'id' must be a string");
  q.id = id.get<std::string>();

  const auto& emb = obj.at("embedding");
  if (!emb.is_array() || emb.empty()) fail(line, "'embedding' must be a nonempty array");
  q.embedding.resize(static_cast<Eigen::Index>(emb.size()));
  for (std::size_t i = 0; i < emb.size(); ++i) {
    if (!emb[i].is_number()) fail(line, "'embedding' entries must be numbers");
    const double v = emb[i].get<double>();
    if (!std::isfinite(v)) fail(line, "'embedding' entries must be finite");
    q.embedding[static_cast<Eigen::Index>(i)] = v;
  }

  const auto& tok = obj.at("tokens");
  if (!tok.is_number_integer() || tok.get<std::int64_t>() < 1)
    fail(line, "'tokens' must be an integer >= 1");
  q.token_len = tok.get<std::int64_t>();

  const auto& out = obj.at("outcomes");
  if (!out.is_object()) fail(line, "'outcomes' must be an object");
  std::map<std::string, int> outcomes;
  for (const auto& [arm, r] : out.items()) {
    if (!r.is_number_integer() || (r.get<int>() != 0 && r.get<int>() != 1))
      fail(line, "outcome for arm '" + arm + "' must be 0 or 1");
    outcomes[arm] = r.get<int>();
  }
  q.outcomes = std::move(outcomes);
  return q;
}

}  // namespace

ReplayDataset parse_dataset(std::istream& in, const std::string& name) {
  ReplayDataset ds;
  ds.name = name;
  std::string text;
  std::size_t line = 0;
  std::size_t declared_d = 0;
  std::set<std::string> ids;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      fail(line, std::string("malformed JSON: ") + e.what());
    }
    if (ds.questions.empty() && obj.is_object() && obj.contains("schema") && !obj.contains("id")) {
      if (obj.at("schema") != kDatasetSchema)
        fail(line, "unsupported dataset schema " + obj.at("schema").dump() + " (expected 1)");
      if (obj.contains("name")) ds.name = obj.at("name").get<std::string>();
      if (obj.contains("d")) declared_d = obj.at("d").get<std::size_t>();
      continue;
    }
    Question q = parse_question(obj, line);
    if (!ids.insert(q.id).second) fail(line, "duplicate question id '" + q.id + "'");
    const auto dim = static_cast<std::size_t>(q.embedding.size());
    if (ds.questions.empty()) {
      ds.d = declared_d ? declared_d : dim;
      for (const auto& [arm, _] : *q.outcomes) ds.arm_ids.push_back(arm);
    }
    if (dim != ds.d)
      fail(line, "embedding dimension " + std::to_string(dim) + " differs from dataset dimension " +
                     std::to_string(ds.d));
    for (const auto& arm : ds.arm_ids) {
      if (!q.outcomes->count(arm)) fail(line, "question '" + q.id + "' is missing an outcome for arm '" + arm + "'");
    }
    if (q.outcomes->size() != ds.arm_ids.size()) {
      for (const auto& [arm, _] : *q.outcomes) {
        if (std::find(ds.arm_ids.begin(), ds.arm_ids.end(), arm) == ds.arm_ids.end())
          fail(line, "question '" + q.id + "' has an outcome for unexpected arm '" + arm + "'");
      }
    }
    ds.questions.push_back(std::move(q));
  }
  if (ds.questions.empty()) throw DataError("dataset '" + name + "' contains no questions");
  return ds;
}

ReplayDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  try {
    return parse_dataset(in, path);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const ReplayDataset& ds) {
  out << json{{"schema", kDatasetSchema}, {"name", ds.name}, {"d", ds.d}}.dump() << '\n';
  for (const auto& q : ds.questions) {
    std::vector<double> emb(q.embedding.data(), q.embedding.data() + q.embedding.size());
    json outcomes = json::object();
    for (const auto& [arm, r] : *q.outcomes) outcomes[arm] = r;
    out << json{{"id", q.id}, {"embedding", emb}, {"tokens", q.token_len}, {"outcomes", outcomes}}.dump()
        << '\n';
  }
}

void save_dataset(const std::string& path, const ReplayDataset& ds) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset '" + path + "'");
  write_dataset(out, ds);
}

void check_against_registry(const ReplayDataset& ds, const std::vector<ArmSpec>& arms) {
  for (const auto& arm : arms) {
    if (std::find(ds.arm_ids.begin(), ds.arm_ids.end(), arm.arm_id) == ds.arm_ids.end())
      throw DataError("dataset '" + ds.name + "' has no outcomes for registered arm '" + arm.arm_id + "'");
  }
}

}  // namespace coke
