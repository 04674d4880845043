#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cellforge/model/types.hpp"
#include "cellforge/traj/connectors.hpp"
#include "cellforge/world/scenario.hpp"

namespace cellforge::cli {

inline constexpr const char* kConfigSchema = "cellforge-config/1";

// Everything a run needs to reproduce: seed, budgets, tolerances, generator
// ranges, parallelism. Round-trips losslessly through its JSON form.
struct RunConfig {
  std::uint64_t master_seed = 0;
  unsigned jobs = 1;
  std::string out_dir = ".";
  model::IkConfig ik;
  traj::ConnectorConfig connector;
  world::GeneratorParams generator;
  bool greedy_velocity_metric = false;

  void validate() const;
};

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

}  // namespace cellforge::cli
