#include "cellforge/kernels/kernels.hpp"

#include <cmath>

#include "cellforge/common.hpp"

namespace cellforge::kernels::scalar {

void wrap_pi_batch(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double y = x[i] - kTwoPi * std::floor((x[i] + kPi) / kTwoPi);
    if (y <= -kPi) y += kTwoPi;
    if (y > kPi) y -= kTwoPi;
    out[i] = y;
  }
}

void poly3_eval(double a, double b, double c, double d, const double* u,
                std::size_t n, double* p, double* dp, double* ddp) {
  const double c2 = 2.0 * c;
  const double d3 = 3.0 * d;
  const double d6 = 6.0 * d;
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = u[i];
    if (p) {
      double t = ui * d;
      t = c + t;
      t = ui * t;
      t = b + t;
      t = ui * t;
      p[i] = a + t;
    }
    if (dp) {
      double t = ui * d3;
      t = c2 + t;
      t = ui * t;
      dp[i] = b + t;
    }
    if (ddp) {
      ddp[i] = c2 + ui * d6;
    }
  }
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void point_segment_dist_sq(double px, double py, const double* ax,
                           const double* ay, const double* bx, const double* by,
                           std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double abx = bx[i] - ax[i];
    const double aby = by[i] - ay[i];
    const double apx = px - ax[i];
    const double apy = py - ay[i];
    const double len2 = abx * abx + aby * aby;
    const double dot = apx * abx + apy * aby;
    double t = len2 > 0.0 ? dot / len2 : 0.0;
    t = t < 0.0 ? 0.0 : t;
    t = t > 1.0 ? 1.0 : t;
    const double dx = apx - t * abx;
    const double dy = apy - t * aby;
    out[i] = dx * dx + dy * dy;
  }
}

}  // namespace cellforge::kernels::scalar
