#pragma once

#include <string>

#include <json.hpp>

#include "cellforge/planners/planners.hpp"

namespace cellforge::planners {

inline constexpr const char* kPlanSchema = "cellforge-plan/1";

// Plan report. Measured wall time lives under the "timing" key so reports
// are byte-identical across reruns apart from that dedicated field. With
// embed_trajectories, sampled (t, q, qd, qdd) rows are included per segment.
nlohmann::json outcome_to_json(const PlanOutcome& outcome,
                               const std::string& planner,
                               const std::string& connector, std::uint64_t seed,
                               bool embed_trajectories = false);

void save_outcome(const nlohmann::json& j, const std::string& path);

// Per-segment trajectory CSV: t,q0..,qd0..,qdd0.. rows at the violation
// sampling resolution.
void export_trajectory_csv(const traj::Trajectory& t, const std::string& path);

}  // namespace cellforge::planners
