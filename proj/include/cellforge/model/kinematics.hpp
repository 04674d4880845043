#pragma once

#include <array>
#include <span>
#include <vector>

#include "cellforge/model/types.hpp"

namespace cellforge::model {

// End-effector pose of the planar chain. Input angles are canonicalized
// before the trigonometric accumulation, so forward_kinematics(canonicalize(q))
// equals forward_kinematics(q) bit for bit.
Pose2 forward_kinematics(const Composition& comp, std::span<const double> q);

// Positions of the joint origins and the tip: out[0] is the base, out[i] the
// end of segment i. out.size() == n_q + 1.
void chain_points(const Composition& comp, std::span<const double> q,
                  std::vector<Vec2>& out);

// 3 x n_q matrix of d(x, y, phi)/dq, row-major rows [x, y, phi].
std::vector<std::array<double, 3>> jacobian_columns(const Composition& comp,
                                                    std::span<const double> q);

JointConfig canonicalize(std::span<const double> q_raw);

// Magnitude of the gravitational moment about each joint axis from all distal
// point masses: links lumped at segment midpoints, joints at their origins,
// plus the payload at the tip.
std::vector<double> static_payload_torques(const Composition& comp,
                                           const JointConfig& q,
                                           double payload_mass);

// Damped-least-squares inverse kinematics from a deterministic
// low-discrepancy set of start configurations. Returns deduplicated canonical
// solutions sorted lexicographically; empty when nothing converges.
std::vector<JointConfig> inverse_kinematics(const Composition& comp,
                                            const Pose2& target,
                                            const IkConfig& cfg);

}  // namespace cellforge::model
