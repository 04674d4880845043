#include "cellforge/planners/graph.hpp"

#include <stdexcept>

#include "cellforge/rng.hpp"

namespace cellforge::planners {

std::vector<model::UnwrappedTarget> extend(const model::JointConfig& q_s,
                                           const model::JointConfig& q_e) {
  if (q_s.q.size() != q_e.q.size())
    throw std::invalid_argument("extend: dimension mismatch");
  const std::size_t n = q_s.q.size();
  std::vector<double> d_short(n), d_long(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = wrap_pi(q_e.q[i] - q_s.q[i]);
    d_short[i] = d;
    d_long[i] = d >= 0.0 ? d - kTwoPi : d + kTwoPi;  // sgn(0) treated as +
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<model::UnwrappedTarget> out(count);
  for (std::size_t way = 0; way < count; ++way) {
    auto& t = out[way];
    t.origin = q_s;
    t.q_abs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (way >> i) & 1U ? d_long[i] : d_short[i];
      t.q_abs[i] = q_s.q[i] + d;
    }
  }
  return out;
}

std::vector<model::JointConfig> admissible_configs(
    const model::Composition& comp, const model::Pose2& pose,
    const world::CollisionScene& scene, const world::Payload& payload,
    const model::IkConfig& ik_cfg, bool check_torque) {
  std::vector<model::JointConfig> out;
  for (auto& sol : model::inverse_kinematics(comp, pose, ik_cfg)) {
    if (world::collides(comp, sol.q, scene, payload)) continue;
    if (check_torque) {
      const auto tau = model::static_payload_torques(comp, sol, payload.mass);
      bool ok = true;
      for (std::size_t j = 0; j < tau.size(); ++j) {
        if (tau[j] > comp.tau_max()[j]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
    }
    out.push_back(std::move(sol));
  }
  return out;
}

MotionGraph build_graph(const model::Composition& comp,
                        const world::TaskSequence& seq,
                        const world::CollisionScene& scene,
                        const model::IkConfig& ik_cfg) {
  if (seq.n_p() < 1) throw std::invalid_argument("build_graph: empty task sequence");
  MotionGraph g;
  g.feasible = true;
  g.payload_mass = seq.payload_mass;
  for (const auto& s : seq.payload_size) g.payload_size.push_back(s);
  for (std::size_t i = 0; i < seq.n_p(); ++i) {
    const world::Payload payload{seq.payload_mass[i], seq.payload_size[i]};
    auto layer = admissible_configs(comp, seq.poses[i], scene, payload, ik_cfg,
                                    /*check_torque=*/true);
    if (layer.empty()) g.feasible = false;
    g.layers.push_back(std::move(layer));
  }
  return g;
}

BestWay best_way_cost(traj::ConnectorKind connector,
                      const model::Composition& comp,
                      const model::JointConfig& u, const model::JointConfig& v,
                      const world::CollisionScene& scene,
                      const world::Payload& payload,
                      const traj::ConnectorConfig& cfg,
                      std::uint64_t edge_seed) {
  BestWay best;
  const auto targets = extend(u, v);
  for (std::size_t way = 0; way < targets.size(); ++way) {
    Rng rng(derive_seed(edge_seed, {static_cast<std::uint64_t>(way)}));
    traj::EdgeResult r =
        traj::connect_edge(connector, comp, u, targets[way], scene, payload, cfg, rng);
    // strict < keeps the lowest way index on ties; all-infeasible keeps way 0
    if (best.way < 0 || r.cost < best.result.cost) {
      best.result = std::move(r);
      best.target = targets[way];
      best.way = static_cast<int>(way);
    }
  }
  return best;
}

}  // namespace cellforge::planners
