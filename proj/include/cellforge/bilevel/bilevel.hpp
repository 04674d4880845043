#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellforge/model/types.hpp"
#include "cellforge/planners/planners.hpp"
#include "cellforge/world/scenario.hpp"

namespace cellforge::bilevel {

struct ModuleLibrary {
  std::vector<model::ModuleSpec> joint_specs;
  std::vector<model::ModuleSpec> link_specs;
  int max_modules = 10;
  int max_motors = 6;
  int min_motors = 4;

  void validate() const;
  static ModuleLibrary from_specs(const std::vector<model::ModuleSpec>& specs,
                                  int max_modules, int max_motors, int min_motors);
};

// All module sequences with: a joint first, length <= max_modules, joint
// count <= max_motors, and no two consecutive links. Deterministic
// length-lexicographic order (joints indexed before links).
std::vector<model::Composition> enumerate_compositions(const ModuleLibrary& lib);

bool filter_min_motors(const model::Composition& c, int min_motors);

// Cheap reach bound first (total length vs. farthest pose), then at least one
// admissible (collision-free) IK solution per pose.
bool filter_reach(const model::Composition& c, const world::TaskSequence& seq,
                  const world::CollisionScene& scene, const model::IkConfig& ik);

// At least one admissible IK solution per place pose whose static torques
// stay within tau_max while carrying that box.
bool filter_payload(const model::Composition& c, const world::TaskSequence& seq,
                    const world::CollisionScene& scene, const model::IkConfig& ik);

struct CompositionFate {
  std::string id;
  std::string fate;  // min_motors | reach | payload | evaluated
  double g = kInf;
  double wall_time = 0.0;
};

struct EliminationTrace {
  std::size_t generated = 0;
  std::size_t after_min_motors = 0;
  std::size_t after_reach = 0;
  std::size_t after_payload = 0;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
  std::optional<model::Composition> best;
  double best_cost = kInf;
  std::optional<planners::PlanOutcome> best_outcome;
  std::vector<CompositionFate> fates;
  double wall_time = 0.0;
};

struct OptimizeConfig {
  planners::PlannerConfig planner;
  planners::Algo algo = planners::Algo::near_optimal;
  traj::ConnectorKind connector = traj::ConnectorKind::deterministic;
  unsigned jobs = 1;
};

// The hierarchical-elimination pipeline: enumerate, filter with increasingly
// expensive criteria, run the motion-level planner on the survivors, return
// the argmin (ties resolve to the earlier enumeration index). Per-composition
// seeds derive from (master seed, composition id), so the parallel map is
// order-independent.
EliminationTrace optimize_composition(const world::Scenario& scenario,
                                      const ModuleLibrary& lib,
                                      const OptimizeConfig& cfg,
                                      std::uint64_t master_seed);

}  // namespace cellforge::bilevel
