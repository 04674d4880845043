#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellforge/cli/run_config.hpp"

namespace cellforge::cli {

// Exit codes: 0 success, 1 usage/config error, 2 infeasible result.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;

struct GenScenarioArgs {
  std::uint64_t seed = 0;
  std::string complexity = "simple";
  std::string out_path;
};

struct PlanArgs {
  std::string scenario_path;
  std::string library_path;
  std::string composition_path;
  std::string planner = "near_optimal";
  std::optional<std::string> connector;  // override the variant default
  std::uint64_t seed = 0;
  std::string out_path;
  bool embed_trajectories = false;
  std::string traj_dir;  // per-segment CSV export when non-empty
};

struct MetricsArgs {
  std::string library_path;
  std::string population_path;  // explicit population file, or
  std::size_t auto_samples = 0; // draw one from the library
  int dof_min = 2;
  int dof_max = 3;
  int max_modules = 5;
  std::vector<std::string> variants{"astar", "spline", "sampler"};
  int repeats = 0;  // 0: single-run campaign only
  std::string repeat_variant = "spline";
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

struct OptimizeArgs {
  std::string scenario_path;
  std::string library_path;
  int max_modules = 5;
  int max_motors = 3;
  int min_motors = 2;
  std::string planner = "near_optimal";
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_dir = ".";
};

int cmd_gen_scenario(const RunConfig& cfg, const GenScenarioArgs& args);
int cmd_plan(const RunConfig& cfg, const PlanArgs& args);
int cmd_metrics(const RunConfig& cfg, const MetricsArgs& args);
int cmd_optimize(const RunConfig& cfg, const OptimizeArgs& args);

}  // namespace cellforge::cli
