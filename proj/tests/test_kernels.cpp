#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "cellforge/common.hpp"
#include "cellforge/kernels/kernels.hpp"
#include "cellforge/rng.hpp"

using namespace cellforge;
namespace k = cellforge::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("wrap_pi known values") {
  CHECK(wrap_pi(3.0 * kPi) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(wrap_pi(-kPi) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(wrap_pi(kPi) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(wrap_pi(2.0 * kPi + 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wrap_pi(0.0) == 0.0);
}

TEST_CASE("wrap_pi range and idempotence") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform(-50.0, 50.0);
    const double w = wrap_pi(x);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(wrap_pi(w) == w);  // bit-exact idempotence
  }
}

TEST_CASE("scalar batch matches elementwise wrap") {
  Rng rng(12);
  const auto x = random_vec(rng, 257, -40.0, 40.0);
  std::vector<double> out(x.size());
  k::scalar::wrap_pi_batch(x.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(out[i] == wrap_pi(x[i]));
}

TEST_CASE("poly3 scalar matches naive evaluation") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const double c = rng.uniform(-2, 2), d = rng.uniform(-2, 2);
    const auto u = random_vec(rng, 33, 0.0, 1.0);
    std::vector<double> p(u.size()), dp(u.size()), ddp(u.size());
    k::scalar::poly3_eval(a, b, c, d, u.data(), u.size(), p.data(), dp.data(),
                          ddp.data());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double ui = u[i];
      CHECK(p[i] == doctest::Approx(a + b * ui + c * ui * ui + d * ui * ui * ui)
                        .epsilon(1e-12));
      CHECK(dp[i] == doctest::Approx(b + 2 * c * ui + 3 * d * ui * ui).epsilon(1e-12));
      CHECK(ddp[i] == doctest::Approx(2 * c + 6 * d * ui).epsilon(1e-12));
    }
  }
}

TEST_CASE("max_abs scalar reference") {
  std::vector<double> v{0.5, -3.25, 1.0, 3.0};
  CHECK(k::scalar::max_abs(v.data(), v.size()) == 3.25);
  CHECK(k::scalar::max_abs(v.data(), 0) == 0.0);
}

TEST_CASE("point_segment_dist_sq scalar geometry") {
  // point above segment midpoint
  double ax = 0, ay = 0, bx = 2, by = 0, out = 0;
  k::scalar::point_segment_dist_sq(1.0, 1.0, &ax, &ay, &bx, &by, 1, &out);
  CHECK(out == doctest::Approx(1.0));
  // beyond endpoint clamps
  k::scalar::point_segment_dist_sq(3.0, 0.0, &ax, &ay, &bx, &by, 1, &out);
  CHECK(out == doctest::Approx(1.0));
  // degenerate segment behaves as a point
  double zx = 1.0, zy = 1.0;
  k::scalar::point_segment_dist_sq(4.0, 5.0, &zx, &zy, &zx, &zy, 1, &out);
  CHECK(out == doctest::Approx(9.0 + 16.0));
}

#if defined(CELLFORGE_HAVE_AVX2_TU)

TEST_CASE("avx2 variants are bit-identical to scalar") {
  if (!k::avx2_supported()) {
    MESSAGE("avx2 not supported on this host; skipping");
    return;
  }
  Rng rng(14);
  // sizes straddle the vector width and exercise the remainder loop
  for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4},
                        std::size_t{7}, std::size_t{64}, std::size_t{1001}}) {
    const auto x = random_vec(rng, n, -40.0, 40.0);
    std::vector<double> r1(n), r2(n);
    k::scalar::wrap_pi_batch(x.data(), r1.data(), n);
    k::avx2::wrap_pi_batch(x.data(), r2.data(), n);
    CHECK(bit_equal(r1, r2));

    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const double c = rng.uniform(-3, 3), d = rng.uniform(-3, 3);
    const auto u = random_vec(rng, n, -0.5, 1.5);
    std::vector<double> p1(n), dp1(n), ddp1(n), p2(n), dp2(n), ddp2(n);
    k::scalar::poly3_eval(a, b, c, d, u.data(), n, p1.data(), dp1.data(), ddp1.data());
    k::avx2::poly3_eval(a, b, c, d, u.data(), n, p2.data(), dp2.data(), ddp2.data());
    CHECK(bit_equal(p1, p2));
    CHECK(bit_equal(dp1, dp2));
    CHECK(bit_equal(ddp1, ddp2));

    CHECK(k::scalar::max_abs(x.data(), n) == k::avx2::max_abs(x.data(), n));

    const auto sax = random_vec(rng, n, -3, 3);
    const auto say = random_vec(rng, n, -3, 3);
    auto sbx = random_vec(rng, n, -3, 3);
    const auto sby = random_vec(rng, n, -3, 3);
    if (n > 2) sbx[2] = sax[2];  // exercise near-degenerate segments
    std::vector<double> d1(n), d2(n);
    k::scalar::point_segment_dist_sq(0.3, -0.7, sax.data(), say.data(), sbx.data(),
                                     sby.data(), n, d1.data());
    k::avx2::point_segment_dist_sq(0.3, -0.7, sax.data(), say.data(), sbx.data(),
                                   sby.data(), n, d2.data());
    CHECK(bit_equal(d1, d2));
  }
}

TEST_CASE("avx2 handles exactly-degenerate segments like scalar") {
  if (!k::avx2_supported()) return;
  const std::size_t n = 8;
  std::vector<double> ax(n, 1.0), ay(n, 2.0), bx(n, 1.0), by(n, 2.0);
  std::vector<double> d1(n), d2(n);
  k::scalar::point_segment_dist_sq(0.0, 0.0, ax.data(), ay.data(), bx.data(),
                                   by.data(), n, d1.data());
  k::avx2::point_segment_dist_sq(0.0, 0.0, ax.data(), ay.data(), bx.data(),
                                 by.data(), n, d2.data());
  CHECK(bit_equal(d1, d2));
  CHECK(d1[0] == doctest::Approx(5.0));
}

#endif  // CELLFORGE_HAVE_AVX2_TU

TEST_CASE("dispatched entry points agree with the scalar reference") {
  Rng rng(15);
  const auto x = random_vec(rng, 123, -20.0, 20.0);
  std::vector<double> r1(x.size()), r2(x.size());
  k::scalar::wrap_pi_batch(x.data(), r1.data(), x.size());
  k::wrap_pi_batch(x.data(), r2.data(), x.size());
  CHECK(bit_equal(r1, r2));
  CHECK(k::max_abs(x.data(), x.size()) == k::scalar::max_abs(x.data(), x.size()));
  CHECK(k::backend_name(k::active_backend()) != nullptr);
}
