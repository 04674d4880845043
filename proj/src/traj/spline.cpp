#include "cellforge/traj/spline.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "cellforge/kernels/kernels.hpp"

namespace cellforge::traj {

namespace {

// Clamped-end slopes of a cubic spline through y on a uniform grid with unit
// segment length (slopes in segment-local units). Thomas algorithm on the
// standard tridiagonal system.
void clamped_slopes(std::span<const double> y, std::vector<double>& k) {
  const std::size_t m = y.size();
  k.assign(m, 0.0);
  if (m < 3) return;  // both ends clamped to zero; nothing interior for m == 2
  const std::size_t inner = m - 2;
  std::vector<double> diag(inner, 4.0), rhs(inner);
  for (std::size_t i = 0; i < inner; ++i)
    rhs[i] = 3.0 * (y[i + 2] - y[i]);
  // sub/super diagonals are 1; clamped ends contribute nothing (k=0)
  for (std::size_t i = 1; i < inner; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  k[m - 2] = rhs[inner - 1] / diag[inner - 1];
  for (std::size_t i = inner - 1; i-- > 0;)
    k[i + 1] = (rhs[i] - k[i + 2]) / diag[i];
}

}  // namespace

class PhaseSplineCurve final : public Curve {
 public:
  explicit PhaseSplineCurve(PhaseSpline spline) : s_(std::move(spline)) {}

  std::size_t dims() const override { return s_.dims(); }
  double duration() const override { return s_.duration(); }

  void sample(std::span<const double> ts, double* q, double* qd,
              double* qdd) const override {
    const std::size_t n = ts.size();
    const std::size_t nseg = s_.segments();
    const double T = s_.duration();
    // phase velocity scaling: dq/dt = dp/du * nseg / T
    const double du_dt = T > 0.0 ? static_cast<double>(nseg) / T : 0.0;
    std::vector<double> u(n);
    std::vector<std::size_t> seg(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double sphase = T > 0.0 ? std::min(std::max(ts[i] / T, 0.0), 1.0) : 0.0;
      double x = sphase * static_cast<double>(nseg);
      auto si = static_cast<std::size_t>(x);
      if (si >= nseg) si = nseg - 1;
      seg[i] = si;
      u[i] = x - static_cast<double>(si);
    }
    for (std::size_t j = 0; j < s_.dims(); ++j) {
      double* qj = q ? q + j * n : nullptr;
      double* qdj = qd ? qd + j * n : nullptr;
      double* qddj = qdd ? qdd + j * n : nullptr;
      std::size_t i = 0;
      while (i < n) {
        std::size_t e = i;
        while (e < n && seg[e] == seg[i]) ++e;
        const auto& c = s_.coeffs_[j][seg[i]];
        kernels::poly3_eval(c[0], c[1], c[2], c[3], u.data() + i, e - i,
                            qj ? qj + i : nullptr, qdj ? qdj + i : nullptr,
                            qddj ? qddj + i : nullptr);
        i = e;
      }
      if (qdj) {
        for (std::size_t m = 0; m < n; ++m) qdj[m] *= du_dt;
      }
      if (qddj) {
        for (std::size_t m = 0; m < n; ++m) qddj[m] *= du_dt * du_dt;
      }
    }
  }

 private:
  PhaseSpline s_;
};

PhaseSpline::PhaseSpline(const std::vector<std::vector<double>>& points,
                         double duration)
    : duration_(duration) {
  if (points.size() < 2) throw std::invalid_argument("spline needs >= 2 points");
  n_joints_ = points.front().size();
  n_seg_ = points.size() - 1;
  coeffs_.resize(n_joints_);
  std::vector<double> y(points.size()), k;
  for (std::size_t j = 0; j < n_joints_; ++j) {
    for (std::size_t p = 0; p < points.size(); ++p) y[p] = points[p][j];
    clamped_slopes(y, k);
    coeffs_[j].resize(n_seg_);
    for (std::size_t s = 0; s < n_seg_; ++s) {
      const double dy = y[s + 1] - y[s];
      coeffs_[j][s] = {y[s], k[s], 3.0 * dy - 2.0 * k[s] - k[s + 1],
                       -2.0 * dy + k[s] + k[s + 1]};
    }
  }
}

void PhaseSpline::phase_extrema(std::size_t grid_points,
                                std::vector<double>& max_d1,
                                std::vector<double>& max_d2) const {
  max_d1.assign(n_joints_, 0.0);
  max_d2.assign(n_joints_, 0.0);
  // per-segment uniform sub-grid, scaled from local u to phase derivatives
  const std::size_t per_seg = std::max<std::size_t>(2, grid_points / n_seg_);
  std::vector<double> u(per_seg), d1(per_seg), d2(per_seg);
  for (std::size_t i = 0; i < per_seg; ++i)
    u[i] = static_cast<double>(i) / static_cast<double>(per_seg - 1);
  const double k1 = static_cast<double>(n_seg_);
  for (std::size_t j = 0; j < n_joints_; ++j) {
    for (std::size_t s = 0; s < n_seg_; ++s) {
      const auto& c = coeffs_[j][s];
      kernels::poly3_eval(c[0], c[1], c[2], c[3], u.data(), per_seg, nullptr,
                          d1.data(), d2.data());
      const double m1 = kernels::max_abs(d1.data(), per_seg) * k1;
      const double m2 = kernels::max_abs(d2.data(), per_seg) * k1 * k1;
      if (m1 > max_d1[j]) max_d1[j] = m1;
      if (m2 > max_d2[j]) max_d2[j] = m2;
    }
  }
}

Trajectory PhaseSpline::to_trajectory() const {
  return Trajectory(std::make_shared<PhaseSplineCurve>(*this));
}

}  // namespace cellforge::traj
