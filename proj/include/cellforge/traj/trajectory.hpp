#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cellforge/common.hpp"

namespace cellforge::traj {

// Continuous joint-space trajectory backed by one of several curve types.
// sample() fills row-major [joint][sample] arrays; times must be
// nondecreasing (all internal grids are).
class Curve {
 public:
  virtual ~Curve() = default;
  virtual std::size_t dims() const = 0;
  virtual double duration() const = 0;
  virtual void sample(std::span<const double> ts, double* q, double* qd,
                      double* qdd) const = 0;
};

class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::shared_ptr<const Curve> curve) : curve_(std::move(curve)) {}

  bool valid() const { return curve_ != nullptr; }
  std::size_t dims() const { return curve_ ? curve_->dims() : 0; }
  double duration() const { return curve_ ? curve_->duration() : 0.0; }

  void sample(std::span<const double> ts, double* q, double* qd, double* qdd) const {
    curve_->sample(ts, q, qd, qdd);
  }

  // Single-time convenience; returns q, qd, qdd stacked per joint.
  void sample_at(double t, std::vector<double>& q, std::vector<double>& qd,
                 std::vector<double>& qdd) const;

  // Zero-duration trajectory holding a fixed configuration.
  static Trajectory constant(std::vector<double> q);

  // Same path shifted by a constant per-joint offset (used to rebase plans
  // onto the chained absolute configurations).
  Trajectory offset_by(std::vector<double> offsets) const;

  const std::shared_ptr<const Curve>& curve() const { return curve_; }

 private:
  std::shared_ptr<const Curve> curve_;
};

// Uniform sampling grid over [0, T] at spacing <= delta_s, endpoints
// included; the single point {0} when T == 0.
std::vector<double> sample_grid(double duration, double delta_s);

// Violation-sampling resolution: T/200 with a 1 ms floor.
inline double default_delta_s(double duration) {
  const double d = duration / 200.0;
  return d > 1e-3 ? d : 1e-3;
}

// Concatenation of curves, each picking up where the previous ended.
Trajectory chain_trajectories(std::vector<Trajectory> parts);

}  // namespace cellforge::traj
