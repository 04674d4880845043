#pragma once

#include <cstdint>
#include <vector>

#include "cellforge/model/kinematics.hpp"
#include "cellforge/model/types.hpp"
#include "cellforge/traj/connectors.hpp"
#include "cellforge/world/collision.hpp"
#include "cellforge/world/scenario.hpp"

namespace cellforge::planners {

// Layered graph over the IK solutions of consecutive task poses. Edges exist
// between all nodes of adjacent layers; their costs are evaluated lazily by
// the planners. payload_* hold the box carried while moving INTO each layer.
struct MotionGraph {
  bool feasible = false;  // false iff some layer has no admissible node
  std::vector<std::vector<model::JointConfig>> layers;
  std::vector<double> payload_mass;
  std::vector<Vec2> payload_size;

  std::size_t n_layers() const { return layers.size(); }
  std::size_t total_nodes() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.size();
    return n;
  }
};

// The 2^{n_q} absolute targets reaching q_e from q_s: per joint the wrapped
// displacement d in (-pi, pi] and its full-turn alternative d - 2*pi*sgn(d),
// with sgn(0) = +1. Way index bit i selects joint i's alternative.
std::vector<model::UnwrappedTarget> extend(const model::JointConfig& q_s,
                                           const model::JointConfig& q_e);

// IK solutions admissible as a graph node: collision-free (with the carried
// box footprint) and, when check_torque, static torques within tau_max.
std::vector<model::JointConfig> admissible_configs(
    const model::Composition& comp, const model::Pose2& pose,
    const world::CollisionScene& scene, const world::Payload& payload,
    const model::IkConfig& ik_cfg, bool check_torque);

// Builds the layered graph for a task sequence. Nodes are admissible IK
// solutions; no edge cost is evaluated yet.
MotionGraph build_graph(const model::Composition& comp,
                        const world::TaskSequence& seq,
                        const world::CollisionScene& scene,
                        const model::IkConfig& ik_cfg);

// Evaluates the connector on every way of extend(u, v) and returns the best
// result together with its target; ties break on the lower way index.
struct BestWay {
  traj::EdgeResult result;
  model::UnwrappedTarget target;
  int way = -1;
};

BestWay best_way_cost(traj::ConnectorKind connector,
                      const model::Composition& comp,
                      const model::JointConfig& u, const model::JointConfig& v,
                      const world::CollisionScene& scene,
                      const world::Payload& payload,
                      const traj::ConnectorConfig& cfg,
                      std::uint64_t edge_seed);

}  // namespace cellforge::planners
