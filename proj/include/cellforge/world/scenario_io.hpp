#pragma once

#include <string>

#include <json.hpp>

#include "cellforge/world/scenario.hpp"

namespace cellforge::world {

inline constexpr const char* kScenarioSchema = "cellforge-scenario/1";

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace cellforge::world
