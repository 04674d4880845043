#include "cellforge/traj/trapezoid.hpp"

#include <cmath>
#include <stdexcept>

namespace cellforge::traj {

double trapezoid_duration_1d(double delta, double v_max, double a_max) {
  if (!(v_max > 0.0) || !(a_max > 0.0))
    throw std::invalid_argument("trapezoid limits must be > 0");
  const double d = std::fabs(delta);
  if (d == 0.0) return 0.0;
  if (d >= v_max * v_max / a_max) return d / v_max + v_max / a_max;
  return 2.0 * std::sqrt(d / a_max);
}

double trapezoid_duration(std::span<const double> delta,
                          std::span<const double> v_max,
                          std::span<const double> a_max) {
  if (delta.size() != v_max.size() || delta.size() != a_max.size())
    throw std::invalid_argument("trapezoid_duration: length mismatch");
  double t = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double ti = trapezoid_duration_1d(delta[i], v_max[i], a_max[i]);
    if (ti > t) t = ti;
  }
  return t;
}

namespace {

struct JointProfile {
  double q0 = 0.0;
  double sign = 1.0;
  double dist = 0.0;    // |delta|
  double t_own = 0.0;   // unstretched duration
  double t_acc = 0.0;
  double t_dec = 0.0;   // start of deceleration phase
  double v_pk = 0.0;
  double a = 0.0;
  double stretch = 1.0;
};

class TrapezoidCurve final : public Curve {
 public:
  TrapezoidCurve(std::span<const double> q_start, std::span<const double> delta,
                 std::span<const double> v_max, std::span<const double> a_max) {
    const std::size_t n = q_start.size();
    joints_.resize(n);
    duration_ = trapezoid_duration(delta, v_max, a_max);
    for (std::size_t i = 0; i < n; ++i) {
      JointProfile& p = joints_[i];
      p.q0 = q_start[i];
      p.sign = delta[i] < 0.0 ? -1.0 : 1.0;
      p.dist = std::fabs(delta[i]);
      p.a = a_max[i];
      p.t_own = trapezoid_duration_1d(delta[i], v_max[i], a_max[i]);
      if (p.dist == 0.0) continue;
      if (p.dist >= v_max[i] * v_max[i] / a_max[i]) {
        p.t_acc = v_max[i] / a_max[i];
        p.v_pk = v_max[i];
      } else {
        p.t_acc = 0.5 * p.t_own;
        p.v_pk = a_max[i] * p.t_acc;
      }
      p.t_dec = p.t_own - p.t_acc;
      p.stretch = p.t_own > 0.0 ? duration_ / p.t_own : 1.0;
    }
  }

  std::size_t dims() const override { return joints_.size(); }
  double duration() const override { return duration_; }

  void sample(std::span<const double> ts, double* q, double* qd,
              double* qdd) const override {
    const std::size_t n = ts.size();
    for (std::size_t j = 0; j < joints_.size(); ++j) {
      const JointProfile& p = joints_[j];
      for (std::size_t i = 0; i < n; ++i) {
        double pos = p.q0, vel = 0.0, acc = 0.0;
        if (p.dist > 0.0) {
          const double tau = std::min(std::max(ts[i] / p.stretch, 0.0), p.t_own);
          double u, du, ddu;  // unstretched profile
          if (tau < p.t_acc) {
            u = 0.5 * p.a * tau * tau;
            du = p.a * tau;
            ddu = p.a;
          } else if (tau < p.t_dec) {
            u = 0.5 * p.a * p.t_acc * p.t_acc + p.v_pk * (tau - p.t_acc);
            du = p.v_pk;
            ddu = 0.0;
          } else {
            const double r = p.t_own - tau;
            u = p.dist - 0.5 * p.a * r * r;
            du = p.a * r;
            ddu = -p.a;
          }
          pos = p.q0 + p.sign * u;
          vel = p.sign * du / p.stretch;
          acc = p.sign * ddu / (p.stretch * p.stretch);
          if (ts[i] >= duration_) {
            pos = p.q0 + p.sign * p.dist;
            vel = 0.0;
            acc = 0.0;
          }
        }
        if (q) q[j * n + i] = pos;
        if (qd) qd[j * n + i] = vel;
        if (qdd) qdd[j * n + i] = acc;
      }
    }
  }

 private:
  std::vector<JointProfile> joints_;
  double duration_ = 0.0;
};

}  // namespace

Trajectory make_trapezoid_trajectory(std::span<const double> q_start,
                                     std::span<const double> delta,
                                     std::span<const double> v_max,
                                     std::span<const double> a_max) {
  if (q_start.size() != delta.size())
    throw std::invalid_argument("make_trapezoid_trajectory: length mismatch");
  bool moving = false;
  for (double d : delta) {
    if (d != 0.0) moving = true;
  }
  if (!moving)
    return Trajectory::constant(std::vector<double>(q_start.begin(), q_start.end()));
  return Trajectory(
      std::make_shared<TrapezoidCurve>(q_start, delta, v_max, a_max));
}

}  // namespace cellforge::traj
