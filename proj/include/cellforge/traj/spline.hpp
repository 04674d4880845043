#pragma once

#include <array>
#include <span>
#include <vector>

#include "cellforge/traj/trajectory.hpp"

namespace cellforge::traj {

// Clamped cubic spline (zero boundary velocity) through waypoints on a
// uniform phase grid, retimed to a duration. Waypoints are row-major
// [point][joint].
class PhaseSpline {
 public:
  PhaseSpline(const std::vector<std::vector<double>>& points, double duration);

  std::size_t dims() const { return n_joints_; }
  std::size_t segments() const { return n_seg_; }
  double duration() const { return duration_; }

  // Max |dq/ds| and |d^2q/ds^2| per joint over a uniform phase grid.
  void phase_extrema(std::size_t grid_points, std::vector<double>& max_d1,
                     std::vector<double>& max_d2) const;

  // Rescales the total duration (path shape unchanged).
  void set_duration(double duration) { duration_ = duration; }

  Trajectory to_trajectory() const;

 private:
  friend class PhaseSplineCurve;
  // coeffs_[joint][seg] = {a, b, c, d} in local u in [0, 1]
  std::vector<std::vector<std::array<double, 4>>> coeffs_;
  std::size_t n_joints_ = 0;
  std::size_t n_seg_ = 0;
  double duration_ = 0.0;
};

}  // namespace cellforge::traj
