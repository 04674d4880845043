#pragma once

#include <cstddef>
#include <cstdint>

// Batched double-precision kernels for the numeric inner loops: angle
// wrapping, cubic segment evaluation, peak magnitude, and point-to-segment
// distances. Each kernel has a scalar reference implementation and an AVX2
// variant selected at runtime. The variants are written to be bit-identical
// to the reference: elementwise IEEE ops in the same order, max-reductions
// only, no FMA contraction (the build forces -ffp-contract=off).

namespace cellforge::kernels {

enum class Backend { scalar, avx2 };

// Backend chosen at first use: AVX2 when the CPU supports it, else scalar.
// CELLFORGE_KERNELS=scalar|avx2 overrides (used by the equivalence tests).
Backend active_backend();
const char* backend_name(Backend b);
bool avx2_supported();

// out[i] = wrap of x[i] into (-pi, pi].
void wrap_pi_batch(const double* x, double* out, std::size_t n);

// Cubic p(u) = a + u*(b + u*(c + u*d)) with first/second derivatives.
// Any of p/dp/ddp may be null to skip that output.
void poly3_eval(double a, double b, double c, double d, const double* u,
                std::size_t n, double* p, double* dp, double* ddp);

// max_i |x[i]|; 0 for n == 0.
double max_abs(const double* x, std::size_t n);

// Squared distance from point (px, py) to each segment (ax[i],ay[i])-(bx[i],by[i]).
// Degenerate segments are treated as points.
void point_segment_dist_sq(double px, double py, const double* ax,
                           const double* ay, const double* bx, const double* by,
                           std::size_t n, double* out);

namespace scalar {
void wrap_pi_batch(const double* x, double* out, std::size_t n);
void poly3_eval(double a, double b, double c, double d, const double* u,
                std::size_t n, double* p, double* dp, double* ddp);
double max_abs(const double* x, std::size_t n);
void point_segment_dist_sq(double px, double py, const double* ax,
                           const double* ay, const double* bx, const double* by,
                           std::size_t n, double* out);
}  // namespace scalar

#if defined(CELLFORGE_HAVE_AVX2_TU)
namespace avx2 {
void wrap_pi_batch(const double* x, double* out, std::size_t n);
void poly3_eval(double a, double b, double c, double d, const double* u,
                std::size_t n, double* p, double* dp, double* ddp);
double max_abs(const double* x, std::size_t n);
void point_segment_dist_sq(double px, double py, const double* ax,
                           const double* ay, const double* bx, const double* by,
                           std::size_t n, double* out);
}  // namespace avx2
#endif

}  // namespace cellforge::kernels
