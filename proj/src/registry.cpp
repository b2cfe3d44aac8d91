#include "coke/registry.hpp"

#include <fstream>
#include <set>

namespace coke {

using nlohmann::json;

namespace {

ArmSpec parse_arm(const json& obj, std::size_t index) {
  const std::string where = "arm registry entry " + std::to_string(index);
  if (!obj.is_object()) throw DataError(where + ": expected an object");
  static const std::set<std::string> known = {"schema",    "arm_id",    "cluster",
                                              "unit_price", "reported_accuracy", "cost_mode",
                                              "sigma"};
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw DataError(where + ": unknown field '" + key + "'");
  }
  if (obj.contains("schema") && obj.at("schema") != kRegistrySchema)
    throw DataError(where + ": unsupported schema " + obj.at("schema").dump());
  for (const char* key : {"arm_id", "cluster", "unit_price", "reported_accuracy", "cost_mode"}) {
    if (!obj.contains(key)) throw DataError(where + ": missing field '" + key + "'");
  }
  try {
    ArmSpec arm;
    arm.arm_id = obj.at("arm_id").get<std::string>();
    arm.cluster = parse_cluster(obj.at("cluster").get<std::string>());
    arm.unit_price = obj.at("unit_price").get<double>();
    arm.reported_accuracy = obj.at("reported_accuracy").get<double>();
    arm.cost_mode = parse_cost_mode(obj.at("cost_mode").get<std::string>());
    if (obj.contains("sigma") && !obj.at("sigma").is_null()) arm.sigma = obj.at("sigma").get<double>();
    arm.validate();
    return arm;
  } catch (const json::exception& e) {
    throw DataError(where + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(where + ": " + e.what());
  }
}

}  // namespace

std::vector<ArmSpec> parse_arm_registry(const json& doc) {
  const json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("schema") || doc.at("schema") != kRegistrySchema)
      throw DataError("arm registry: missing or unsupported \"schema\" (expected 1)");
    if (!doc.contains("arms")) throw DataError("arm registry: missing \"arms\" array");
    list = &doc.at("arms");
  }
  if (!list->is_array()) throw DataError("arm registry: expected an array of arms");
  if (list->empty()) throw DataError("arm registry: no arms defined");

  std::vector<ArmSpec> arms;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < list->size(); ++i) {
    ArmSpec arm = parse_arm((*list)[i], i);
    if (!seen.insert(arm.arm_id).second)
      throw DataError("arm registry: duplicate arm_id '" + arm.arm_id + "'");
    arms.push_back(std::move(arm));
  }
  return arms;
}

std::vector<ArmSpec> load_arm_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open arm registry '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("arm registry '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_arm_registry(doc);
}

json to_json(const ArmSpec& arm) {
  json j{{"arm_id", arm.arm_id},
         {"cluster", to_string(arm.cluster)},
         {"unit_price", arm.unit_price},
         {"reported_accuracy", arm.reported_accuracy},
         {"cost_mode", to_string(arm.cost_mode)}};
  if (arm.sigma) j["sigma"] = *arm.sigma;
  return j;
}

json registry_to_json(const std::vector<ArmSpec>& arms) {
  json list = json::array();
  for (const auto& a : arms) list.push_back(to_json(a));
  return json{{"schema", kRegistrySchema}, {"arms", list}};
}

const ArmSpec& find_arm(const std::vector<ArmSpec>& arms, const std::string& arm_id) {
  for (const auto& a : arms) {
    if (a.arm_id == arm_id) return a;
  }
  throw DataError("unknown arm id '" + arm_id + "'");
}

}  // namespace coke
