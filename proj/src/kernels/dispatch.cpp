#include "cellforge/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cellforge::kernels {

bool avx2_supported() {
#if defined(CELLFORGE_HAVE_AVX2_TU) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

Backend pick_backend() {
  if (const char* env = std::getenv("CELLFORGE_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return Backend::avx2;
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = pick_backend();
  return b;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void wrap_pi_batch(const double* x, double* out, std::size_t n) {
#if defined(CELLFORGE_HAVE_AVX2_TU)
  if (active_backend() == Backend::avx2) return avx2::wrap_pi_batch(x, out, n);
#endif
  scalar::wrap_pi_batch(x, out, n);
}

void poly3_eval(double a, double b, double c, double d, const double* u,
                std::size_t n, double* p, double* dp, double* ddp) {
#if defined(CELLFORGE_HAVE_AVX2_TU)
  if (active_backend() == Backend::avx2)
    return avx2::poly3_eval(a, b, c, d, u, n, p, dp, ddp);
#endif
  scalar::poly3_eval(a, b, c, d, u, n, p, dp, ddp);
}

double max_abs(const double* x, std::size_t n) {
#if defined(CELLFORGE_HAVE_AVX2_TU)
  if (active_backend() == Backend::avx2) return avx2::max_abs(x, n);
#endif
  return scalar::max_abs(x, n);
}

void point_segment_dist_sq(double px, double py, const double* ax,
                           const double* ay, const double* bx, const double* by,
                           std::size_t n, double* out) {
#if defined(CELLFORGE_HAVE_AVX2_TU)
  if (active_backend() == Backend::avx2)
    return avx2::point_segment_dist_sq(px, py, ax, ay, bx, by, n, out);
#endif
  scalar::point_segment_dist_sq(px, py, ax, ay, bx, by, n, out);
}

}  // namespace cellforge::kernels
