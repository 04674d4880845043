#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cellforge/model/types.hpp"
#include "cellforge/rng.hpp"
#include "cellforge/traj/trajectory.hpp"
#include "cellforge/world/collision.hpp"
#include "cellforge/world/scenario.hpp"

namespace cellforge::traj {

// Outcome of connecting two joint states: a duration cost when a violation-
// free trajectory was found, infinity otherwise.
struct EdgeResult {
  bool feasible = false;
  double cost = kInf;      // s
  Trajectory trajectory;   // invalid when infeasible
  int n_c = 0;             // violation count of the returned/best candidate
  double wall_time = 0.0;  // s, measured per call
};

// Cross-entropy via-point optimizer budgets (the stochastic connector).
struct CeConfig {
  int n_via = 3;
  int population = 64;
  int cheap_iters = 10;
  int full_iters = 100;
  double elite_frac = 0.125;
  double init_sigma_scale = 0.25;
  double init_sigma_min = 0.3;  // rad, exploration floor for stationary joints
  double sigma_floor = 1e-4;
  double smoothing = 0.9;
  int timing_grid = 512;       // phase samples used to retime candidates
  double timing_margin = 1e-3; // relative duration pad over the sampled extrema
};

// Budgeted bidirectional sampling planner (the greedy Sampler variant's
// connector). The budget is deterministic: time_budget * iters_per_second
// micro-steps, so identical seeds replay identically; wall time is only
// measured, never used for control flow.
struct SamplerConfig {
  double time_budget = 0.5;        // s
  double iters_per_second = 20000; // micro-step rate the budget assumes
  double goal_bias = 0.1;
  double step = 0.2;               // rad, extension step (L2)
  double collision_step = 0.02;    // rad, local-path check spacing (Linf)
  int shortcut_passes = 50;
};

struct ConnectorConfig {
  CeConfig ce;
  SamplerConfig sampler;
};

enum class ConnectorKind { deterministic, two_stage, sampling };

const char* connector_name(ConnectorKind k);
ConnectorKind connector_from_name(const std::string& name);

// Number of time samples violating a constraint: collision, or a velocity /
// acceleration limit exceeded beyond 1e-9, sampled at spacing delta_s.
int count_violations(const Trajectory& traj, const model::Composition& comp,
                     const world::CollisionScene& scene,
                     const world::Payload& payload, double delta_s);

int count_violations(const Trajectory& traj, const model::Composition& comp,
                     const world::Scenario& s, const world::Payload& payload,
                     double delta_s);

// Straight-line joint segment with synchronized trapezoid timing; feasible
// iff the sampled trajectory is violation-free. Cost equals the closed-form
// trapezoid duration.
EdgeResult evaluate_edge_deterministic(const model::Composition& comp,
                                       const model::JointConfig& q_s,
                                       const model::UnwrappedTarget& target,
                                       const world::CollisionScene& scene,
                                       const world::Payload& payload);

// Cross-entropy search over interior via points of a clamped cubic spline;
// candidate cost is duration + 100 * violations; returns the best candidate.
EdgeResult optimize_edge_stochastic(const model::Composition& comp,
                                    const model::JointConfig& q_s,
                                    const model::UnwrappedTarget& target,
                                    const world::CollisionScene& scene,
                                    const world::Payload& payload,
                                    const CeConfig& cfg, int n_iter, Rng& rng);

// Feasibility probe with the cheap budget, then a full-budget rerun; returns
// the better of the two (infeasible after stage one short-circuits).
EdgeResult two_stage_connect(const model::Composition& comp,
                             const model::JointConfig& q_s,
                             const model::UnwrappedTarget& target,
                             const world::CollisionScene& scene,
                             const world::Payload& payload, const CeConfig& cfg,
                             Rng& rng);

// Bidirectional tree search inside the monotone corridor between origin and
// target, shortcut-smoothed and trapezoid-timed per polyline segment.
EdgeResult sampling_connect(const model::Composition& comp,
                            const model::JointConfig& q_s,
                            const model::UnwrappedTarget& target,
                            const world::CollisionScene& scene,
                            const world::Payload& payload,
                            const SamplerConfig& cfg, Rng& rng);

// Dispatch by kind.
EdgeResult connect_edge(ConnectorKind kind, const model::Composition& comp,
                        const model::JointConfig& q_s,
                        const model::UnwrappedTarget& target,
                        const world::CollisionScene& scene,
                        const world::Payload& payload,
                        const ConnectorConfig& cfg, Rng& rng);

}  // namespace cellforge::traj
