#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cellforge/model/types.hpp"
#include "cellforge/rng.hpp"
#include "cellforge/traj/connectors.hpp"
#include "cellforge/traj/trapezoid.hpp"

using namespace cellforge;
using namespace cellforge::traj;
using cellforge::model::Composition;
using cellforge::model::JointConfig;
using cellforge::model::ModuleSpec;
using cellforge::model::UnwrappedTarget;
using cellforge::world::CollisionScene;
using cellforge::world::Disc;
using cellforge::world::Obstacle;
using cellforge::world::Payload;
using cellforge::world::Scenario;

namespace {

Composition one_joint_arm(double v = 1.0, double a = 1.0) {
  return Composition({ModuleSpec::joint("j", v, a, 100.0), ModuleSpec::link("l", 1.0)});
}

Composition two_joint_arm(double v = 1.5, double a = 2.0) {
  return Composition({ModuleSpec::joint("j1", v, a, 100.0),
                      ModuleSpec::link("l1", 0.6),
                      ModuleSpec::joint("j2", v, a, 100.0),
                      ModuleSpec::link("l2", 0.6)});
}

Scenario empty_scenario() {
  Scenario s;
  s.conveyor_region = {{-30.0, -30.0}, {-29.0, -29.0}};
  s.pallet_region = {{29.0, 29.0}, {30.0, 30.0}};
  s.boxes = {{{0.1, 0.1}, 1.0}};
  s.pick_pose = {-29.0, -29.5, 0.0};
  s.place_poses = {{29.0, 29.5, kPi}};
  return s;
}

UnwrappedTarget make_target(const JointConfig& origin, std::vector<double> q_abs) {
  UnwrappedTarget t;
  t.origin = origin;
  t.q_abs = std::move(q_abs);
  return t;
}

}  // namespace

TEST_CASE("trapezoid duration closed form") {
  CHECK(trapezoid_duration_1d(0.0, 1.0, 1.0) == 0.0);
  CHECK(trapezoid_duration_1d(1.0, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(trapezoid_duration_1d(4.0, 1.0, 1.0) == doctest::Approx(5.0));
  CHECK(trapezoid_duration_1d(-4.0, 1.0, 1.0) == doctest::Approx(5.0));
  // triangular regime
  CHECK(trapezoid_duration_1d(0.25, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(trapezoid_duration_1d(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("synchronized trajectory respects limits and endpoints") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(3);
    std::vector<double> q0(n), d(n), v(n), a(n);
    for (std::size_t j = 0; j < n; ++j) {
      q0[j] = rng.uniform(-3, 3);
      d[j] = rng.uniform(-6, 6);
      v[j] = rng.uniform(0.5, 3.0);
      a[j] = rng.uniform(0.5, 4.0);
    }
    const double T = trapezoid_duration(d, v, a);
    const Trajectory traj = make_trapezoid_trajectory(q0, d, v, a);
    CHECK(traj.duration() == doctest::Approx(T).epsilon(1e-12));

    const auto ts = sample_grid(T, default_delta_s(T));
    std::vector<double> q(n * ts.size()), qd(n * ts.size()), qdd(n * ts.size());
    traj.sample(ts, q.data(), qd.data(), qdd.data());
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(q[j * ts.size()] == doctest::Approx(q0[j]).epsilon(1e-12));
      CHECK(q[(j + 1) * ts.size() - 1] == doctest::Approx(q0[j] + d[j]).epsilon(1e-9));
      CHECK(qd[j * ts.size()] == doctest::Approx(0.0));
      CHECK(qd[(j + 1) * ts.size() - 1] == doctest::Approx(0.0));
      for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(std::fabs(qd[j * ts.size() + i]) <= v[j] + 1e-9);
        CHECK(std::fabs(qdd[j * ts.size() + i]) <= a[j] + 1e-9);
      }
    }
  }
}

TEST_CASE("deterministic connector cost equals the closed form") {
  Rng rng(42);
  const Scenario s = empty_scenario();
  const CollisionScene scene(s);
  for (int trial = 0; trial < 1000; ++trial) {
    const double v = rng.uniform(0.5, 3.0), a = rng.uniform(0.5, 4.0);
    const auto comp = two_joint_arm(v, a);
    JointConfig q_s{{rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)}};
    std::vector<double> q_abs{q_s.q[0] + rng.uniform(-kTwoPi, kTwoPi),
                              q_s.q[1] + rng.uniform(-kTwoPi, kTwoPi)};
    const std::vector<double> delta{q_abs[0] - q_s.q[0], q_abs[1] - q_s.q[1]};
    const auto r = evaluate_edge_deterministic(comp, q_s,
                                               make_target(q_s, q_abs), scene,
                                               Payload::none());
    REQUIRE(r.feasible);
    CHECK(r.cost == trapezoid_duration(delta, comp.v_max(), comp.a_max()));
  }
}

TEST_CASE("deterministic connector examples") {
  const auto comp = one_joint_arm();
  const CollisionScene scene(empty_scenario());
  const JointConfig q0{{0.0}};

  SUBCASE("zero displacement") {
    const auto r = evaluate_edge_deterministic(comp, q0, make_target(q0, {0.0}),
                                               scene, Payload::none());
    CHECK(r.feasible);
    CHECK(r.cost == 0.0);
    CHECK(r.n_c == 0);
  }
  SUBCASE("unit move in free space") {
    const auto r = evaluate_edge_deterministic(comp, q0, make_target(q0, {1.0}),
                                               scene, Payload::none());
    CHECK(r.feasible);
    CHECK(r.cost == doctest::Approx(2.0));
  }
  SUBCASE("obstacle at the midpoint configuration") {
    Scenario s = empty_scenario();
    // tip of the 1R arm at angle 0.5 is (cos 0.5, sin 0.5)
    s.obstacles.push_back(Obstacle{Disc{{std::cos(0.5), std::sin(0.5)}, 0.1}});
    const CollisionScene blocked(s);
    const auto r = evaluate_edge_deterministic(comp, q0, make_target(q0, {1.0}),
                                               blocked, Payload::none());
    CHECK(!r.feasible);
    CHECK(r.cost == kInf);
    CHECK(r.n_c > 0);
    CHECK(!r.trajectory.valid());
  }
}

TEST_CASE("count_violations by construction") {
  const auto comp = one_joint_arm();
  const JointConfig q0{{0.0}};

  SUBCASE("feasible trajectory counts zero") {
    const CollisionScene scene(empty_scenario());
    const std::vector<double> d{1.0};
    const Trajectory t =
        make_trapezoid_trajectory(q0.q, d, comp.v_max(), comp.a_max());
    CHECK(count_violations(t, comp, scene, Payload::none(),
                           default_delta_s(t.duration())) == 0);
  }

  SUBCASE("collision samples are counted exactly") {
    Scenario s = empty_scenario();
    s.obstacles.push_back(Obstacle{Disc{{std::cos(0.5), std::sin(0.5)}, 0.08}});
    const CollisionScene scene(s);
    const std::vector<double> d{1.0};
    const Trajectory t =
        make_trapezoid_trajectory(q0.q, d, comp.v_max(), comp.a_max());
    const double delta_s = default_delta_s(t.duration());
    // independent count: apply the definition sample by sample
    const auto ts = sample_grid(t.duration(), delta_s);
    int expected = 0;
    std::vector<double> q, qd, qdd;
    for (const double tt : ts) {
      t.sample_at(tt, q, qd, qdd);
      if (world::collides(comp, q, scene, Payload::none())) ++expected;
    }
    CHECK(expected > 0);
    CHECK(count_violations(t, comp, scene, Payload::none(), delta_s) == expected);
  }

  SUBCASE("velocity breaches are counted exactly") {
    // time the profile against relaxed limits, then count under strict ones
    const auto relaxed = one_joint_arm(2.0, 1.0);
    const auto strict = one_joint_arm(1.0, 1.0);
    const CollisionScene scene(empty_scenario());
    const std::vector<double> d{4.0};
    const Trajectory t =
        make_trapezoid_trajectory(q0.q, d, relaxed.v_max(), relaxed.a_max());
    const double delta_s = default_delta_s(t.duration());
    const auto ts = sample_grid(t.duration(), delta_s);
    int expected = 0;
    std::vector<double> q, qd, qdd;
    for (const double tt : ts) {
      t.sample_at(tt, q, qd, qdd);
      if (std::fabs(qd[0]) > 1.0 + 1e-9 || std::fabs(qdd[0]) > 1.0 + 1e-9) ++expected;
    }
    CHECK(expected > 0);
    CHECK(count_violations(t, strict, scene, Payload::none(), delta_s) == expected);
  }
}

TEST_CASE("stochastic connector basics") {
  const auto comp = two_joint_arm();
  const CollisionScene scene(empty_scenario());
  const CeConfig ce;

  SUBCASE("zero displacement needs no search") {
    const JointConfig q0{{0.3, -0.2}};
    Rng rng(1);
    const auto r = optimize_edge_stochastic(comp, q0, make_target(q0, q0.q),
                                            scene, Payload::none(), ce,
                                            ce.full_iters, rng);
    CHECK(r.feasible);
    CHECK(r.cost == 0.0);
  }

  SUBCASE("free space cost is bounded below by the trapezoid time") {
    Rng seeds(43);
    for (int trial = 0; trial < 20; ++trial) {
      const JointConfig q0{{seeds.uniform(-2, 2), seeds.uniform(-2, 2)}};
      const std::vector<double> q_abs{q0.q[0] + seeds.uniform(-kPi, kPi),
                                      q0.q[1] + seeds.uniform(-kPi, kPi)};
      const std::vector<double> delta{q_abs[0] - q0.q[0], q_abs[1] - q0.q[1]};
      Rng rng(derive_seed(100, {static_cast<std::uint64_t>(trial)}));
      const auto r = optimize_edge_stochastic(comp, q0, make_target(q0, q_abs),
                                              scene, Payload::none(), ce,
                                              ce.cheap_iters, rng);
      REQUIRE(r.feasible);
      CHECK(r.cost >=
            trapezoid_duration(delta, comp.v_max(), comp.a_max()) - 1e-9);
    }
  }

  SUBCASE("identical seeds reproduce the result") {
    const JointConfig q0{{0.1, -0.4}};
    const auto target = make_target(q0, {1.4, 0.9});
    Rng r1(7), r2(7);
    const auto a = optimize_edge_stochastic(comp, q0, target, scene,
                                            Payload::none(), ce, 20, r1);
    const auto b = optimize_edge_stochastic(comp, q0, target, scene,
                                            Payload::none(), ce, 20, r2);
    CHECK(a.feasible == b.feasible);
    CHECK(a.cost == b.cost);
    CHECK(a.n_c == b.n_c);
  }

  SUBCASE("via search detours around an obstacle on the chord") {
    // the straight joint-space segment sweeps the tip through the disc; a
    // bent-elbow via path passes inside the arc
    Scenario s = empty_scenario();
    s.obstacles.push_back(Obstacle{
        Disc{{1.2 * std::cos(kPi / 4), 1.2 * std::sin(kPi / 4)}, 0.1}});
    const CollisionScene blocked(s);
    const JointConfig q0{{0.0, 0.0}};
    const auto target = make_target(q0, {kPi / 2, 0.0});
    const auto straight = evaluate_edge_deterministic(comp, q0, target, blocked,
                                                      Payload::none());
    CHECK(!straight.feasible);
    Rng rng(8);
    const auto r = optimize_edge_stochastic(comp, q0, target, blocked,
                                            Payload::none(), ce, ce.full_iters,
                                            rng);
    REQUIRE(r.feasible);
    const std::vector<double> delta{kPi / 2, 0.0};
    CHECK(r.cost >
          trapezoid_duration(delta, comp.v_max(), comp.a_max()) - 1e-9);
    CHECK(count_violations(r.trajectory, comp, blocked, Payload::none(),
                           default_delta_s(r.trajectory.duration())) == 0);
  }
}

TEST_CASE("stochastic connector converges near the trapezoid bound") {
  // statistical contract: with the full budget, 95 of 100 seeded free-space
  // runs land within 5% of the kinematic lower bound
  const auto comp = two_joint_arm();
  const CollisionScene scene(empty_scenario());
  const CeConfig ce;
  Rng seeds(44);
  int within = 0;
  const int runs = 100;
  for (int trial = 0; trial < runs; ++trial) {
    const JointConfig q0{{seeds.uniform(-1.5, 1.5), seeds.uniform(-1.5, 1.5)}};
    std::vector<double> delta(2);
    for (auto& d : delta) {
      d = seeds.uniform(0.3, kPi);
      if (seeds.uniform01() < 0.5) d = -d;
    }
    const std::vector<double> q_abs{q0.q[0] + delta[0], q0.q[1] + delta[1]};
    Rng rng(derive_seed(4500, {static_cast<std::uint64_t>(trial)}));
    const auto r = optimize_edge_stochastic(comp, q0, make_target(q0, q_abs),
                                            scene, Payload::none(), ce,
                                            ce.full_iters, rng);
    REQUIRE(r.feasible);
    const double bound = trapezoid_duration(delta, comp.v_max(), comp.a_max());
    if (r.cost <= 1.05 * bound) ++within;
  }
  MESSAGE("within 5% of the bound: ", within, "/", runs);
  CHECK(within >= 95);
}

TEST_CASE("two stage connector") {
  const auto comp = one_joint_arm();
  const CeConfig ce;

  SUBCASE("blocked corridor is rejected by the probe stage") {
    Scenario s = empty_scenario();
    // the 1R tip must sweep through this arc to reach the target
    s.obstacles.push_back(Obstacle{Disc{{std::cos(0.45), std::sin(0.45)}, 0.12}});
    const CollisionScene scene(s);
    const JointConfig q0{{0.0}};
    Rng rng(9);
    const auto r = two_stage_connect(comp, q0, make_target(q0, {kPi / 2}), scene,
                                     Payload::none(), ce, rng);
    CHECK(!r.feasible);
    CHECK(r.cost == kInf);
  }

  SUBCASE("free edge returns the better of both stages") {
    const CollisionScene scene(empty_scenario());
    const JointConfig q0{{0.0}};
    Rng rng_probe(11), rng_two(11);
    const auto probe = optimize_edge_stochastic(comp, q0, make_target(q0, {1.2}),
                                                scene, Payload::none(), ce,
                                                ce.cheap_iters, rng_probe);
    const auto both = two_stage_connect(comp, q0, make_target(q0, {1.2}), scene,
                                        Payload::none(), ce, rng_two);
    REQUIRE(probe.feasible);
    REQUIRE(both.feasible);
    CHECK(both.cost <= probe.cost + 1e-12);
  }

  SUBCASE("zero displacement") {
    const CollisionScene scene(empty_scenario());
    const JointConfig q0{{0.7}};
    Rng rng(13);
    const auto r = two_stage_connect(comp, q0, make_target(q0, {0.7}), scene,
                                     Payload::none(), ce, rng);
    CHECK(r.feasible);
    CHECK(r.cost == 0.0);
  }
}

TEST_CASE("sampling connector") {
  const auto comp = two_joint_arm();
  SamplerConfig sampler;
  sampler.time_budget = 0.2;

  SUBCASE("free straight segment smooths to the chord") {
    const CollisionScene scene(empty_scenario());
    const JointConfig q0{{0.2, -0.5}};
    const std::vector<double> q_abs{1.1, 0.4};
    const std::vector<double> delta{q_abs[0] - q0.q[0], q_abs[1] - q0.q[1]};
    Rng rng(15);
    const auto r = sampling_connect(comp, q0, make_target(q0, q_abs), scene,
                                    Payload::none(), sampler, rng);
    REQUIRE(r.feasible);
    CHECK(r.cost ==
          doctest::Approx(trapezoid_duration(delta, comp.v_max(), comp.a_max())));
  }

  SUBCASE("zero displacement") {
    const CollisionScene scene(empty_scenario());
    const JointConfig q0{{0.2, -0.5}};
    Rng rng(16);
    const auto r = sampling_connect(comp, q0, make_target(q0, q0.q), scene,
                                    Payload::none(), sampler, rng);
    CHECK(r.feasible);
    CHECK(r.cost == 0.0);
  }

  SUBCASE("blocked corridor exhausts the budget") {
    const auto arm = one_joint_arm();
    Scenario s = empty_scenario();
    s.obstacles.push_back(Obstacle{Disc{{std::cos(0.45), std::sin(0.45)}, 0.12}});
    const CollisionScene scene(s);
    const JointConfig q0{{0.0}};
    SamplerConfig tight = sampler;
    tight.time_budget = 0.05;
    Rng rng(17);
    const auto r = sampling_connect(arm, q0, make_target(q0, {kPi / 2}), scene,
                                    Payload::none(), tight, rng);
    CHECK(!r.feasible);
  }

  SUBCASE("identical seeds reproduce the result") {
    const CollisionScene scene(empty_scenario());
    const JointConfig q0{{0.0, 0.0}};
    const auto target = make_target(q0, {2.2, -1.3});
    Rng r1(19), r2(19);
    const auto a = sampling_connect(comp, q0, target, scene, Payload::none(),
                                    sampler, r1);
    const auto b = sampling_connect(comp, q0, target, scene, Payload::none(),
                                    sampler, r2);
    CHECK(a.feasible == b.feasible);
    CHECK(a.cost == b.cost);
  }
}

TEST_CASE("feasible results replay to zero violations") {
  const auto comp = two_joint_arm();
  Scenario s = empty_scenario();
  s.obstacles.push_back(Obstacle{Disc{{0.8, 0.6}, 0.15}});
  const CollisionScene scene(s);
  const ConnectorConfig cfg;
  Rng seeds(46);
  int replayed = 0;
  for (int trial = 0; trial < 15; ++trial) {
    const JointConfig q0{{seeds.uniform(-2, 2), seeds.uniform(-2, 2)}};
    if (world::collides(comp, q0.q, scene, Payload::none())) continue;
    const std::vector<double> q_abs{q0.q[0] + seeds.uniform(-kPi, kPi),
                                    q0.q[1] + seeds.uniform(-kPi, kPi)};
    const auto target = make_target(q0, q_abs);
    for (const auto kind : {ConnectorKind::deterministic, ConnectorKind::two_stage,
                            ConnectorKind::sampling}) {
      Rng rng(derive_seed(777, {static_cast<std::uint64_t>(trial),
                                static_cast<std::uint64_t>(kind)}));
      const auto r =
          connect_edge(kind, comp, q0, target, scene, Payload::none(), cfg, rng);
      if (!r.feasible) continue;
      CHECK(count_violations(r.trajectory, comp, scene, Payload::none(),
                             default_delta_s(r.trajectory.duration())) == 0);
      ++replayed;
    }
  }
  CHECK(replayed > 10);
}

TEST_CASE("adding an obstacle never turns an infeasible edge feasible") {
  const auto comp = one_joint_arm();
  const JointConfig q0{{0.0}};
  const auto target = make_target(q0, {kPi / 2});
  Scenario blocked = empty_scenario();
  blocked.obstacles.push_back(Obstacle{Disc{{std::cos(0.45), std::sin(0.45)}, 0.12}});
  Scenario more = blocked;
  more.obstacles.push_back(Obstacle{Disc{{std::cos(1.2), std::sin(1.2)}, 0.1}});
  const ConnectorConfig cfg;
  for (const auto kind : {ConnectorKind::deterministic, ConnectorKind::two_stage,
                          ConnectorKind::sampling}) {
    Rng r1(21), r2(21);
    const auto a = connect_edge(kind, comp, q0, target, CollisionScene(blocked),
                                Payload::none(), cfg, r1);
    const auto b = connect_edge(kind, comp, q0, target, CollisionScene(more),
                                Payload::none(), cfg, r2);
    CHECK(!a.feasible);
    CHECK(!b.feasible);
  }
}

TEST_CASE("chained trajectories expose total duration and continuity") {
  const auto comp = one_joint_arm();
  const std::vector<double> q0{0.0};
  const std::vector<double> d1{1.0}, d2{-0.5};
  const std::vector<double> q1{1.0};
  auto t1 = make_trapezoid_trajectory(q0, d1, comp.v_max(), comp.a_max());
  auto t2 = make_trapezoid_trajectory(q1, d2, comp.v_max(), comp.a_max());
  const double total = t1.duration() + t2.duration();
  const Trajectory chain = chain_trajectories({t1, t2});
  CHECK(chain.duration() == doctest::Approx(total));
  std::vector<double> q, qd, qdd;
  chain.sample_at(t1.duration(), q, qd, qdd);
  CHECK(q[0] == doctest::Approx(1.0).epsilon(1e-9));
  chain.sample_at(total, q, qd, qdd);
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-9));
}
