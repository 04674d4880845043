#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellforge/planners/graph.hpp"

namespace cellforge::planners {

enum class Algo { near_optimal, astar, greedy };

const char* algo_name(Algo a);

// One planned motion segment: the chosen absolute target (chained onto the
// previous segments) and its edge evaluation.
struct PlanSegment {
  model::UnwrappedTarget target;
  traj::EdgeResult edge;
  int way = -1;
};

struct PlanStats {
  std::size_t nodes = 0;
  std::size_t edges_evaluated = 0;   // (u, v) pairs for graph planners,
                                     // attempted targets for greedy
  std::size_t connector_calls = 0;
  double wall_time = 0.0;  // s, measured
};

struct PlanOutcome {
  double cost = kInf;
  std::optional<model::JointConfig> start;  // layer-1 configuration used
  std::vector<PlanSegment> segments;        // empty when cost == inf or n_p == 1
  PlanStats stats;

  bool feasible() const { return cost < kInf; }
};

struct PlannerConfig {
  model::IkConfig ik;
  traj::ConnectorConfig connector;
  // greedy candidate ordering: joint-space euclidean norm (the default) or
  // velocity-weighted Linf time estimate
  bool greedy_velocity_metric = false;
};

// Minimum over the 2^{n_q} ways of max_i |d_i| / v_max_i; admissible for every
// connector whose edge cost is at least the synchronized trapezoid time.
double heuristic(const model::JointConfig& u, const model::JointConfig& v,
                 std::span<const double> v_max);

// The searches, over a prebuilt graph. The near-optimal planner is uniform
// cost (Dijkstra) from a virtual source joined to every layer-1 node; the
// A* variant adds the heuristic toward the nearest final-layer node; the
// greedy planner follows the first-feasible strategy.
PlanOutcome plan_over_graph(Algo algo, const model::Composition& comp,
                            const MotionGraph& graph,
                            const world::CollisionScene& scene,
                            traj::ConnectorKind connector,
                            const PlannerConfig& cfg, std::uint64_t seed);

// Full pipeline: IK layers from the task sequence, then the search.
PlanOutcome plan(Algo algo, const model::Composition& comp,
                 const world::TaskSequence& seq, const world::Scenario& scenario,
                 traj::ConnectorKind connector, const PlannerConfig& cfg,
                 std::uint64_t seed);

// Named planner variants: the reference and the paper's three trade-offs.
struct Variant {
  std::string name;
  Algo algo;
  traj::ConnectorKind connector;
};

Variant variant_from_name(const std::string& name);

}  // namespace cellforge::planners
