#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coke/types.hpp"

namespace coke {

inline constexpr int kRegistrySchema = 1;

// Accepts {"schema": 1, "arms": [...]} or a bare array of arm objects.
// Rejects duplicate ids and out-of-range prices or accuracies.
std::vector<ArmSpec> parse_arm_registry(const nlohmann::json& doc);
std::vector<ArmSpec> load_arm_registry(const std::string& path);

nlohmann::json to_json(const ArmSpec& arm);
nlohmann::json registry_to_json(const std::vector<ArmSpec>& arms);

const ArmSpec& find_arm(const std::vector<ArmSpec>& arms, const std::string& arm_id);

}  // namespace coke
