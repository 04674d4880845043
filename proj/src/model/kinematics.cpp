#include "cellforge/model/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cellforge/kernels/kernels.hpp"
#include "cellforge/rng.hpp"

namespace cellforge::model {

namespace {

void check_dims(const Composition& comp, std::span<const double> q) {
  if (q.size() != comp.n_q())
    throw std::invalid_argument("angle vector length does not match composition n_q");
}

}  // namespace

Pose2 forward_kinematics(const Composition& comp, std::span<const double> q) {
  check_dims(comp, q);
  std::vector<double> qc(q.size());
  kernels::wrap_pi_batch(q.data(), qc.data(), q.size());
  const auto& lens = comp.link_lengths();
  double theta = 0.0, x = 0.0, y = 0.0;
  for (std::size_t i = 0; i < qc.size(); ++i) {
    theta += qc[i];
    x += lens[i] * std::cos(theta);
    y += lens[i] * std::sin(theta);
  }
  return {x, y, wrap_pi(theta)};
}

void chain_points(const Composition& comp, std::span<const double> q,
                  std::vector<Vec2>& out) {
  check_dims(comp, q);
  out.resize(comp.n_q() + 1);
  out[0] = {0.0, 0.0};
  const auto& lens = comp.link_lengths();
  double theta = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    theta += wrap_pi(q[i]);
    out[i + 1] = {out[i].x + lens[i] * std::cos(theta),
                  out[i].y + lens[i] * std::sin(theta)};
  }
}

std::vector<std::array<double, 3>> jacobian_columns(const Composition& comp,
                                                    std::span<const double> q) {
  check_dims(comp, q);
  const std::size_t n = q.size();
  const auto& lens = comp.link_lengths();
  // theta_k and the per-segment direction terms
  std::vector<double> sin_t(n), cos_t(n);
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    theta += wrap_pi(q[k]);
    sin_t[k] = std::sin(theta);
    cos_t[k] = std::cos(theta);
  }
  // dx/dq_i = -sum_{k>=i} L_k sin(theta_k); dy/dq_i = sum_{k>=i} L_k cos(theta_k)
  std::vector<std::array<double, 3>> cols(n);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    sx += lens[i] * sin_t[i];
    sy += lens[i] * cos_t[i];
    cols[i] = {-sx, sy, 1.0};
  }
  return cols;
}

JointConfig canonicalize(std::span<const double> q_raw) {
  if (!all_finite(q_raw))
    throw std::invalid_argument("canonicalize: non-finite joint angle");
  JointConfig out;
  out.q.resize(q_raw.size());
  kernels::wrap_pi_batch(q_raw.data(), out.q.data(), q_raw.size());
  return out;
}

std::vector<double> static_payload_torques(const Composition& comp,
                                           const JointConfig& q,
                                           double payload_mass) {
  check_dims(comp, q.q);
  if (payload_mass < 0.0)
    throw std::invalid_argument("payload mass must be >= 0");
  const std::size_t n = comp.n_q();
  std::vector<Vec2> pts;
  chain_points(comp, q.q, pts);

  // Point masses distal of each joint: segment masses at midpoints, joint
  // masses at their origins, payload at the tip.
  std::vector<double> tau(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = pts[i].x;
    double moment = 0.0;
    for (std::size_t k = i; k < n; ++k) {
      const double mid_x = 0.5 * (pts[k].x + pts[k + 1].x);
      moment += comp.link_mass()[k] * (mid_x - xi);
      if (k > i) moment += comp.joint_mass()[k] * (pts[k].x - xi);
    }
    moment += payload_mass * (pts[n].x - xi);
    tau[i] = kGravity * std::fabs(moment);
  }
  return tau;
}

namespace {

// Additive-recurrence (R_d) low-discrepancy sequence over (-pi, pi]^d.
class StartSequence {
 public:
  StartSequence(std::size_t dims, std::uint64_t seed) : alphas_(dims) {
    // generalized golden ratio: x^(d+1) = x + 1
    double g = 1.5;
    for (int it = 0; it < 64; ++it)
      g = std::pow(1.0 + g, 1.0 / (static_cast<double>(dims) + 1.0));
    double a = 1.0;
    for (auto& alpha : alphas_) {
      a /= g;
      alpha = a;
    }
    std::uint64_t s = seed;
    offset_ = 0.5 + static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
  }

  void fill(std::size_t index, std::vector<double>& q) const {
    q.resize(alphas_.size());
    for (std::size_t j = 0; j < alphas_.size(); ++j) {
      const double u =
          offset_ + static_cast<double>(index + 1) * alphas_[j];
      q[j] = wrap_pi(kTwoPi * (u - std::floor(u)) - kPi);
    }
  }

 private:
  std::vector<double> alphas_;
  double offset_ = 0.5;
};

struct Sym3 {
  // symmetric 3x3: [[a,b,c],[b,d,e],[c,e,f]]
  double a, b, c, d, e, f;
};

// Solves M z = r for symmetric positive-definite M via Cramer's rule.
bool solve3(const Sym3& m, const double r[3], double z[3]) {
  const double det = m.a * (m.d * m.f - m.e * m.e) -
                     m.b * (m.b * m.f - m.e * m.c) +
                     m.c * (m.b * m.e - m.d * m.c);
  if (!(std::fabs(det) > 1e-300)) return false;
  const double inv = 1.0 / det;
  z[0] = inv * (r[0] * (m.d * m.f - m.e * m.e) -
                m.b * (r[1] * m.f - m.e * r[2]) +
                m.c * (r[1] * m.e - m.d * r[2]));
  z[1] = inv * (m.a * (r[1] * m.f - r[2] * m.e) -
                r[0] * (m.b * m.f - m.e * m.c) +
                m.c * (m.b * r[2] - r[1] * m.c));
  z[2] = inv * (m.a * (m.d * r[2] - r[1] * m.e) -
                m.b * (m.b * r[2] - r[1] * m.c) +
                r[0] * (m.b * m.e - m.d * m.c));
  return true;
}

// One damped-least-squares step toward the target; returns the error norms.
struct IkError {
  double pos;
  double ang;
};

IkError pose_error(const Composition& comp, std::span<const double> q,
                   const Pose2& target, double err[3]) {
  const Pose2 p = forward_kinematics(comp, q);
  err[0] = target.x - p.x;
  err[1] = target.y - p.y;
  err[2] = wrap_pi(target.phi - p.phi);
  return {std::hypot(err[0], err[1]), std::fabs(err[2])};
}

bool dls_solve(const Composition& comp, const Pose2& target, double damping,
               int iters, double step_clamp, const IkConfig& cfg,
               std::vector<double>& q) {
  const std::size_t n = comp.n_q();
  double err[3];
  for (int it = 0; it < iters; ++it) {
    const IkError e = pose_error(comp, q, target, err);
    if (e.pos <= cfg.tol_pos && e.ang <= cfg.tol_ang) return true;
    const auto cols = jacobian_columns(comp, q);
    // M = J J^T + damping^2 I
    Sym3 m{damping * damping, 0, 0, damping * damping, 0, damping * damping};
    for (std::size_t j = 0; j < n; ++j) {
      m.a += cols[j][0] * cols[j][0];
      m.b += cols[j][0] * cols[j][1];
      m.c += cols[j][0] * cols[j][2];
      m.d += cols[j][1] * cols[j][1];
      m.e += cols[j][1] * cols[j][2];
      m.f += cols[j][2] * cols[j][2];
    }
    double z[3];
    if (!solve3(m, err, z)) return false;
    for (std::size_t j = 0; j < n; ++j) {
      double dq = cols[j][0] * z[0] + cols[j][1] * z[1] + cols[j][2] * z[2];
      dq = std::clamp(dq, -step_clamp, step_clamp);
      q[j] += dq;
    }
  }
  const IkError e = pose_error(comp, q, target, err);
  return e.pos <= cfg.tol_pos && e.ang <= cfg.tol_ang;
}

}  // namespace

std::vector<JointConfig> inverse_kinematics(const Composition& comp,
                                            const Pose2& target,
                                            const IkConfig& cfg) {
  if (cfg.n_starts < 1) throw std::invalid_argument("ik: n_starts must be >= 1");
  const std::size_t n = comp.n_q();
  StartSequence starts(n, cfg.start_seed);

  std::vector<JointConfig> accepted;
  std::vector<double> q;
  for (int s = 0; s < cfg.n_starts; ++s) {
    starts.fill(static_cast<std::size_t>(s), q);
    if (s == 0) std::fill(q.begin(), q.end(), 0.0);  // deterministic zero start
    if (!dls_solve(comp, target, cfg.damping, cfg.max_iters, cfg.step_clamp, cfg, q))
      continue;
    // polish with light damping to tighten well below the tolerances; near
    // singularities the low-damping step can misbehave, so keep the better of
    // the two iterates
    std::vector<double> polished = q;
    dls_solve(comp, target, 1e-6, cfg.polish_iters, cfg.step_clamp, cfg, polished);
    double err_q[3], err_p[3];
    const IkError eq = pose_error(comp, q, target, err_q);
    const IkError ep = pose_error(comp, polished, target, err_p);
    if (ep.pos / cfg.tol_pos + ep.ang / cfg.tol_ang <=
        eq.pos / cfg.tol_pos + eq.ang / cfg.tol_ang)
      q = polished;
    JointConfig sol = canonicalize(q);
    bool dup = false;
    for (const auto& other : accepted) {
      double dist = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        dist = std::max(dist, std::fabs(wrap_pi(sol.q[j] - other.q[j])));
      if (dist < cfg.dedup_radius) {
        dup = true;
        break;
      }
    }
    if (!dup) accepted.push_back(std::move(sol));
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const JointConfig& a, const JointConfig& b) { return a.q < b.q; });
  return accepted;
}

}  // namespace cellforge::model
