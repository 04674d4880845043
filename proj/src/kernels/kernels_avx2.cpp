#include "cellforge/kernels/kernels.hpp"

#if defined(CELLFORGE_HAVE_AVX2_TU)

#include <immintrin.h>

#include <cmath>

#include "cellforge/common.hpp"

// AVX2 variants of the scalar reference kernels. Every lane performs the same
// IEEE operation sequence as the reference, so outputs are bit-identical; the
// remainder elements fall back to the scalar functions.

namespace cellforge::kernels::avx2 {

namespace {
inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}
}  // namespace

void wrap_pi_batch(const double* x, double* out, std::size_t n) {
  const __m256d vpi = _mm256_set1_pd(kPi);
  const __m256d vnpi = _mm256_set1_pd(-kPi);
  const __m256d v2pi = _mm256_set1_pd(kTwoPi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d q = _mm256_div_pd(_mm256_add_pd(v, vpi), v2pi);
    __m256d y = _mm256_sub_pd(v, _mm256_mul_pd(v2pi, _mm256_floor_pd(q)));
    // y <= -pi  ->  y += 2*pi
    __m256d le = _mm256_cmp_pd(y, vnpi, _CMP_LE_OQ);
    y = _mm256_add_pd(y, _mm256_and_pd(le, v2pi));
    // y > pi  ->  y -= 2*pi
    __m256d gt = _mm256_cmp_pd(y, vpi, _CMP_GT_OQ);
    y = _mm256_sub_pd(y, _mm256_and_pd(gt, v2pi));
    _mm256_storeu_pd(out + i, y);
  }
  if (i < n) scalar::wrap_pi_batch(x + i, out + i, n - i);
}

void poly3_eval(double a, double b, double c, double d, const double* u,
                std::size_t n, double* p, double* dp, double* ddp) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vd = _mm256_set1_pd(d);
  const __m256d vc2 = _mm256_set1_pd(2.0 * c);
  const __m256d vd3 = _mm256_set1_pd(3.0 * d);
  const __m256d vd6 = _mm256_set1_pd(6.0 * d);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vu = _mm256_loadu_pd(u + i);
    if (p) {
      __m256d t = _mm256_mul_pd(vu, vd);
      t = _mm256_add_pd(vc, t);
      t = _mm256_mul_pd(vu, t);
      t = _mm256_add_pd(vb, t);
      t = _mm256_mul_pd(vu, t);
      _mm256_storeu_pd(p + i, _mm256_add_pd(va, t));
    }
    if (dp) {
      __m256d t = _mm256_mul_pd(vu, vd3);
      t = _mm256_add_pd(vc2, t);
      t = _mm256_mul_pd(vu, t);
      _mm256_storeu_pd(dp + i, _mm256_add_pd(vb, t));
    }
    if (ddp) {
      _mm256_storeu_pd(ddp + i, _mm256_add_pd(vc2, _mm256_mul_pd(vu, vd6)));
    }
  }
  if (i < n) {
    scalar::poly3_eval(a, b, c, d, u + i, n - i, p ? p + i : nullptr,
                       dp ? dp + i : nullptr, ddp ? ddp + i : nullptr);
  }
}

double max_abs(const double* x, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vm = _mm256_max_pd(vm, abs_pd(_mm256_loadu_pd(x + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vm);
  double m = lanes[0];
  if (lanes[1] > m) m = lanes[1];
  if (lanes[2] > m) m = lanes[2];
  if (lanes[3] > m) m = lanes[3];
  for (; i < n; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void point_segment_dist_sq(double px, double py, const double* ax,
                           const double* ay, const double* bx, const double* by,
                           std::size_t n, double* out) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vax = _mm256_loadu_pd(ax + i);
    const __m256d vay = _mm256_loadu_pd(ay + i);
    const __m256d vbx = _mm256_loadu_pd(bx + i);
    const __m256d vby = _mm256_loadu_pd(by + i);
    const __m256d abx = _mm256_sub_pd(vbx, vax);
    const __m256d aby = _mm256_sub_pd(vby, vay);
    const __m256d apx = _mm256_sub_pd(vpx, vax);
    const __m256d apy = _mm256_sub_pd(vpy, vay);
    const __m256d len2 =
        _mm256_add_pd(_mm256_mul_pd(abx, abx), _mm256_mul_pd(aby, aby));
    const __m256d dot =
        _mm256_add_pd(_mm256_mul_pd(apx, abx), _mm256_mul_pd(apy, aby));
    const __m256d nonzero = _mm256_cmp_pd(len2, zero, _CMP_GT_OQ);
    __m256d t = _mm256_and_pd(nonzero, _mm256_div_pd(dot, len2));
    t = _mm256_max_pd(zero, t);
    t = _mm256_min_pd(one, t);
    const __m256d dx = _mm256_sub_pd(apx, _mm256_mul_pd(t, abx));
    const __m256d dy = _mm256_sub_pd(apy, _mm256_mul_pd(t, aby));
    _mm256_storeu_pd(out + i,
                     _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  }
  if (i < n) {
    scalar::point_segment_dist_sq(px, py, ax + i, ay + i, bx + i, by + i, n - i,
                                  out + i);
  }
}

}  // namespace cellforge::kernels::avx2

#endif  // CELLFORGE_HAVE_AVX2_TU
