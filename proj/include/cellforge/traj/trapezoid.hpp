#pragma once

#include <span>
#include <vector>

#include "cellforge/traj/trajectory.hpp"

namespace cellforge::traj {

// Minimal duration to move |delta| with a rest-to-rest trapezoidal velocity
// profile under limits (v, a): |d| >= v^2/a gives |d|/v + v/a, otherwise the
// triangular profile 2*sqrt(|d|/a).
double trapezoid_duration_1d(double delta, double v_max, double a_max);

// All joints synchronized to the slowest joint's profile time.
double trapezoid_duration(std::span<const double> delta,
                          std::span<const double> v_max,
                          std::span<const double> a_max);

// Straight joint-space segment from q_start by delta, each joint running its
// own trapezoid stretched to the synchronized duration. Velocities are zero
// at both ends.
Trajectory make_trapezoid_trajectory(std::span<const double> q_start,
                                     std::span<const double> delta,
                                     std::span<const double> v_max,
                                     std::span<const double> a_max);

}  // namespace cellforge::traj
