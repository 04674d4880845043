#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cellforge/model/kinematics.hpp"
#include "cellforge/model/library_io.hpp"
#include "cellforge/rng.hpp"

using namespace cellforge;
using namespace cellforge::model;

namespace {

// Two unit links, generous limits; the workhorse arm of the geometric oracles.
Composition two_link_arm(double l1 = 1.0, double l2 = 1.0) {
  return Composition({ModuleSpec::joint("j1", 1.0, 1.0, 100.0),
                      ModuleSpec::link("l1", l1),
                      ModuleSpec::joint("j2", 1.0, 1.0, 100.0),
                      ModuleSpec::link("l2", l2)});
}

Composition random_arm(Rng& rng, std::size_t n_q) {
  std::vector<ModuleSpec> mods;
  for (std::size_t i = 0; i < n_q; ++i) {
    mods.push_back(ModuleSpec::joint("j" + std::to_string(i), 1.0, 1.0, 50.0));
    mods.push_back(
        ModuleSpec::link("l" + std::to_string(i), rng.uniform(0.3, 1.5)));
  }
  return Composition(std::move(mods));
}

}  // namespace

TEST_CASE("composition derivation") {
  const auto c = two_link_arm();
  CHECK(c.n_q() == 2);
  CHECK(c.link_lengths() == std::vector<double>{1.0, 1.0});
  CHECK(c.total_reach() == doctest::Approx(2.0));
  CHECK(c.id() == "j1-l1-j2-l2");

  // back-to-back joints give a zero-length segment
  const Composition bb({ModuleSpec::joint("a", 1, 1, 1),
                        ModuleSpec::joint("b", 1, 1, 1),
                        ModuleSpec::link("l", 0.5)});
  CHECK(bb.link_lengths() == std::vector<double>{0.0, 0.5});

  CHECK_THROWS_AS(Composition({ModuleSpec::link("l", 1.0)}), std::invalid_argument);
  CHECK_THROWS_AS(Composition(std::vector<ModuleSpec>{}), std::invalid_argument);
}

TEST_CASE("forward kinematics examples") {
  const auto c = two_link_arm();
  const double q1[2] = {0.0, 0.0};
  Pose2 p = forward_kinematics(c, q1);
  CHECK(p.x == doctest::Approx(2.0));
  CHECK(p.y == doctest::Approx(0.0));
  CHECK(p.phi == doctest::Approx(0.0));

  const double q2[2] = {kPi / 2, 0.0};
  p = forward_kinematics(c, q2);
  CHECK(p.x == doctest::Approx(0.0));
  CHECK(p.y == doctest::Approx(2.0));
  CHECK(p.phi == doctest::Approx(kPi / 2));

  const double q3[2] = {kPi / 2, -kPi / 2};
  p = forward_kinematics(c, q3);
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(1.0));
  CHECK(p.phi == doctest::Approx(0.0));

  const double bad[1] = {0.0};
  CHECK_THROWS_AS(forward_kinematics(c, bad), std::invalid_argument);
}

TEST_CASE("canonicalize") {
  const double a[1] = {3.0 * kPi};
  CHECK(canonicalize(a).q[0] == doctest::Approx(kPi));
  const double b[1] = {-kPi};
  CHECK(canonicalize(b).q[0] == doctest::Approx(kPi));
  const double c[1] = {2.0 * kPi + 0.5};
  CHECK(canonicalize(c).q[0] == doctest::Approx(0.5));
  const double nan[1] = {std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(canonicalize(nan), std::invalid_argument);
}

TEST_CASE("canonicalize is idempotent and preserves forward kinematics exactly") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto comp = random_arm(rng, 1 + rng.uniform_index(3));
    std::vector<double> q(comp.n_q());
    for (auto& v : q) v = rng.uniform(-10.0, 10.0);
    const JointConfig c1 = canonicalize(q);
    const JointConfig c2 = canonicalize(c1.q);
    CHECK(c1.q == c2.q);  // bit-exact idempotence
    const Pose2 p1 = forward_kinematics(comp, q);
    const Pose2 p2 = forward_kinematics(comp, c1.q);
    CHECK(p1.x == p2.x);
    CHECK(p1.y == p2.y);
    CHECK(p1.phi == p2.phi);
  }
}

TEST_CASE("jacobian structure") {
  const auto c = two_link_arm();
  const double q[2] = {0.0, 0.0};
  const auto cols = jacobian_columns(c, q);
  // orientation row is all ones for revolute planar joints
  CHECK(cols[0][2] == 1.0);
  CHECK(cols[1][2] == 1.0);
  // column 2 of (x, y) is the cross-product rule of the distal link
  CHECK(cols[1][0] == doctest::Approx(0.0));
  CHECK(cols[1][1] == doctest::Approx(1.0));
}

TEST_CASE("jacobian matches central finite differences") {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto comp = random_arm(rng, 1 + rng.uniform_index(4));
    std::vector<double> q(comp.n_q());
    for (auto& v : q) v = rng.uniform(-2.5, 2.5);
    const auto cols = jacobian_columns(comp, q);
    const double h = 1e-7;
    for (std::size_t j = 0; j < comp.n_q(); ++j) {
      auto qp = q, qm = q;
      qp[j] += h;
      qm[j] -= h;
      const Pose2 pp = forward_kinematics(comp, qp);
      const Pose2 pm = forward_kinematics(comp, qm);
      const double fd[3] = {(pp.x - pm.x) / (2 * h), (pp.y - pm.y) / (2 * h),
                            wrap_pi(pp.phi - pm.phi) / (2 * h)};
      for (int r = 0; r < 3; ++r) {
        const double scale = std::max(1.0, std::fabs(cols[j][r]));
        CHECK(std::fabs(cols[j][r] - fd[r]) / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("inverse kinematics examples") {
  const auto c = two_link_arm();
  IkConfig cfg;

  // the stretched targets sit on a kinematic singularity: iterates satisfy
  // the pose tolerances ~2e-4 away from the exact root, so assert within the
  // dedup radius rather than machine precision
  SUBCASE("stretched pose has the unique solution (0,0)") {
    const auto sols = inverse_kinematics(c, {2.0, 0.0, 0.0}, cfg);
    REQUIRE(sols.size() == 1);
    CHECK(std::fabs(sols[0].q[0]) < cfg.dedup_radius);
    CHECK(std::fabs(sols[0].q[1]) < cfg.dedup_radius);
  }
  SUBCASE("vertical stretched pose") {
    const auto sols = inverse_kinematics(c, {0.0, 2.0, kPi / 2}, cfg);
    REQUIRE(sols.size() == 1);
    CHECK(std::fabs(sols[0].q[0] - kPi / 2) < cfg.dedup_radius);
    CHECK(std::fabs(sols[0].q[1]) < cfg.dedup_radius);
  }
  SUBCASE("unreachable target gives the empty set") {
    CHECK(inverse_kinematics(c, {3.0, 0.0, 0.0}, cfg).empty());
  }
}

TEST_CASE("ik round trip and dedup on random reachable targets") {
  Rng rng(23);
  IkConfig cfg;
  for (int trial = 0; trial < 40; ++trial) {
    const auto comp = random_arm(rng, 2 + rng.uniform_index(2));
    std::vector<double> q_true(comp.n_q());
    for (auto& v : q_true) v = rng.uniform(-kPi, kPi);
    const Pose2 target = forward_kinematics(comp, q_true);
    const auto sols = inverse_kinematics(comp, target, cfg);
    REQUIRE(!sols.empty());
    for (const auto& s : sols) {
      const Pose2 p = forward_kinematics(comp, s.q);
      CHECK(std::hypot(p.x - target.x, p.y - target.y) <= cfg.tol_pos);
      CHECK(std::fabs(wrap_pi(p.phi - target.phi)) <= cfg.tol_ang);
    }
    for (std::size_t i = 0; i < sols.size(); ++i) {
      for (std::size_t j = i + 1; j < sols.size(); ++j) {
        double dist = 0.0;
        for (std::size_t d = 0; d < comp.n_q(); ++d)
          dist = std::max(dist, std::fabs(wrap_pi(sols[i].q[d] - sols[j].q[d])));
        CHECK(dist >= cfg.dedup_radius);
      }
    }
  }
}

TEST_CASE("static payload torques") {
  const auto c = two_link_arm();
  SUBCASE("stretched arm with unit payload") {
    const auto tau = static_payload_torques(c, JointConfig{{0.0, 0.0}}, 1.0);
    CHECK(tau[0] == doctest::Approx(2.0 * kGravity));
    CHECK(tau[1] == doctest::Approx(1.0 * kGravity));
  }
  SUBCASE("zero payload and massless links give zero torque") {
    const auto tau = static_payload_torques(c, JointConfig{{0.7, -0.3}}, 0.0);
    CHECK(tau[0] == doctest::Approx(0.0));
    CHECK(tau[1] == doctest::Approx(0.0));
  }
  SUBCASE("vertical arm has zero moment arm") {
    const auto tau = static_payload_torques(c, JointConfig{{kPi / 2, 0.0}}, 1.0);
    CHECK(tau[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tau[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("link masses load the proximal joints") {
    const Composition heavy({ModuleSpec::joint("j", 1, 1, 100),
                             ModuleSpec::link("l", 1.0, 2.0)});
    const auto tau = static_payload_torques(heavy, JointConfig{{0.0}}, 0.0);
    CHECK(tau[0] == doctest::Approx(2.0 * kGravity * 0.5));
  }
  CHECK_THROWS_AS(static_payload_torques(c, JointConfig{{0.0}}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("module library json round trip") {
  const std::vector<ModuleSpec> lib{ModuleSpec::joint("j1", 1.5, 2.0, 40.0, 1.2),
                                    ModuleSpec::link("l1", 0.8, 0.4)};
  const std::string path = "/tmp/cellforge_test_library.json";
  save_module_library(lib, path);
  const auto loaded = load_module_library(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].id == "j1");
  CHECK(loaded[0].v_max == 1.5);
  CHECK(loaded[1].length == 0.8);

  const auto comp = composition_from_ids(loaded, {"j1", "l1", "j1"});
  CHECK(comp.n_q() == 2);
  CHECK_THROWS_AS(composition_from_ids(loaded, {"nope"}), std::invalid_argument);
}
