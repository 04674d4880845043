#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cellforge/model/types.hpp"
#include "cellforge/rng.hpp"
#include "cellforge/world/collision.hpp"
#include "cellforge/world/scenario.hpp"
#include "cellforge/world/scenario_io.hpp"

using namespace cellforge;
using namespace cellforge::world;

namespace {

model::Composition two_link_arm() {
  using model::ModuleSpec;
  return model::Composition({ModuleSpec::joint("j1", 1.0, 1.0, 100.0),
                             ModuleSpec::link("l1", 1.0),
                             ModuleSpec::joint("j2", 1.0, 1.0, 100.0),
                             ModuleSpec::link("l2", 1.0)});
}

// minimal hand-built scenario with regions far away from the arm workspace
Scenario bare_scenario() {
  Scenario s;
  s.conveyor_region = {{-30.0, -30.0}, {-29.0, -29.0}};
  s.pallet_region = {{29.0, 29.0}, {30.0, 30.0}};
  s.boxes = {{{0.1, 0.1}, 1.0}};
  s.pick_pose = {-29.0, -29.5, 0.0};
  s.place_poses = {{29.0, 29.5, kPi}};
  return s;
}

}  // namespace

TEST_CASE("generator determinism") {
  GeneratorParams params;
  params.complexity = Complexity::complex_;
  const Scenario a = generate_scenario(7, params);
  const Scenario b = generate_scenario(7, params);
  CHECK(scenario_to_json(a).dump() == scenario_to_json(b).dump());
  const Scenario c = generate_scenario(8, params);
  CHECK(scenario_to_json(a).dump() != scenario_to_json(c).dump());
}

TEST_CASE("simple class has no obstacles") {
  GeneratorParams params;
  params.complexity = Complexity::simple;
  for (std::uint64_t seed : {1u, 2u, 3u, 17u, 99u}) {
    const Scenario s = generate_scenario(seed, params);
    CHECK(s.obstacles.empty());
  }
}

TEST_CASE("complex class places pillars near the base") {
  GeneratorParams params;
  params.complexity = Complexity::complex_;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = generate_scenario(seed, params);
    REQUIRE(!s.obstacles.empty());
    CHECK(s.obstacles.size() >= 1);
    CHECK(s.obstacles.size() <= 3);
    for (const auto& o : s.obstacles) {
      const auto& d = std::get<Disc>(o.shape);
      CHECK(d.center.norm() <= params.pillar_dist_max + 1e-12);
    }
  }
}

TEST_CASE("box count range and scenario invariants hold across seeds") {
  GeneratorParams params;
  params.min_boxes = 2;
  params.max_boxes = 4;
  params.complexity = Complexity::complex_;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Scenario s = generate_scenario(seed, params);
    CHECK(s.boxes.size() >= 2);
    CHECK(s.boxes.size() <= 4);
    CHECK_NOTHROW(s.validate());
    const TaskSequence seq = task_sequence(s);
    CHECK(seq.n_p() == 2 * s.boxes.size());
  }
}

TEST_CASE("task sequence interleaves pick and place with payload on places") {
  GeneratorParams params;
  params.min_boxes = 1;
  params.max_boxes = 1;
  const Scenario s = generate_scenario(5, params);
  const TaskSequence seq = task_sequence(s);
  REQUIRE(seq.n_p() == 2);
  CHECK(seq.payload_mass[0] == 0.0);
  CHECK(seq.payload_mass[1] == doctest::Approx(s.boxes[0].mass));
  CHECK(seq.poses[0].x == doctest::Approx(s.pick_pose.x));
  CHECK(seq.poses[1].x == doctest::Approx(s.place_poses[0].x));

  Scenario degenerate = s;
  degenerate.boxes.clear();
  degenerate.place_poses.clear();
  CHECK_THROWS_AS(task_sequence(degenerate), std::invalid_argument);
}

TEST_CASE("collision examples") {
  const auto comp = two_link_arm();
  Scenario s = bare_scenario();

  SUBCASE("disc on the stretched arm") {
    s.obstacles.push_back(Obstacle{Disc{{1.0, 0.0}, 0.2}});
    const double q[2] = {0.0, 0.0};
    CHECK(collides(comp, q, s, Payload::none()));
  }
  SUBCASE("no obstacles near the arm") {
    const double q[2] = {0.0, 0.0};
    CHECK(!collides(comp, q, s, Payload::none()));
  }
  SUBCASE("vertical arm clear of the disc") {
    s.obstacles.push_back(Obstacle{Disc{{1.0, 0.0}, 0.2}});
    const double q[2] = {kPi / 2, 0.0};
    CHECK(!collides(comp, q, s, Payload::none()));
  }
  SUBCASE("carried box footprint can collide when links are clear") {
    s.obstacles.push_back(Obstacle{Disc{{2.0, 0.3}, 0.2}});
    const double q[2] = {0.0, 0.0};
    CHECK(!collides(comp, q, s, Payload::none()));
    CHECK(collides(comp, q, s, Payload{1.0, {0.4, 0.4}}));
  }
  SUBCASE("links must stay out of region interiors") {
    Scenario r = bare_scenario();
    r.conveyor_region = {{0.5, -0.25}, {1.5, 0.25}};
    r.pick_pose = {1.0, 0.25, 0.0};
    const double q[2] = {0.0, 0.0};
    CHECK(collides(comp, q, r, Payload::none()));
    const double up[2] = {kPi / 2, 0.0};
    CHECK(!collides(comp, up, r, Payload::none()));
  }
}

TEST_CASE("collision is invariant under full turns") {
  const auto comp = two_link_arm();
  Rng rng(31);
  GeneratorParams params;
  params.complexity = Complexity::complex_;
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario s = generate_scenario(200 + trial, params);
    const CollisionScene scene(s);
    std::vector<double> q{rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
    const bool base = collides(comp, q, scene, Payload::none());
    std::vector<double> shifted = q;
    shifted[trial % 2] += (trial % 4 < 2 ? 1 : -1) * kTwoPi;
    CHECK(collides(comp, shifted, scene, Payload::none()) == base);
  }
}

TEST_CASE("enlarging an obstacle never clears a collision") {
  const auto comp = two_link_arm();
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    Scenario s = bare_scenario();
    const Vec2 c{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const double r = rng.uniform(0.05, 0.3);
    s.obstacles.push_back(Obstacle{Disc{c, r}});
    std::vector<double> q{rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
    if (collides(comp, q, s, Payload::none())) {
      std::get<Disc>(s.obstacles[0].shape).radius = r * 2.0;
      CHECK(collides(comp, q, s, Payload::none()));
    }
  }
}

TEST_CASE("batched segment test agrees with the scalar predicate") {
  GeneratorParams params;
  params.complexity = Complexity::complex_;
  const Scenario s = generate_scenario(42, params);
  const CollisionScene scene(s);
  Rng rng(33);
  const std::size_t n = 64;
  std::vector<double> ax(n), ay(n), bx(n), by(n);
  for (std::size_t i = 0; i < n; ++i) {
    ax[i] = rng.uniform(-2, 2);
    ay[i] = rng.uniform(-2, 2);
    bx[i] = rng.uniform(-2, 2);
    by[i] = rng.uniform(-2, 2);
  }
  std::vector<std::uint8_t> flags(n, 0);
  scene.segment_blocked_batch(ax.data(), ay.data(), bx.data(), by.data(), n,
                              flags.data());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(static_cast<bool>(flags[i]) ==
          scene.segment_blocked({ax[i], ay[i]}, {bx[i], by[i]}));
  }
}

TEST_CASE("scenario json round trip") {
  GeneratorParams params;
  params.complexity = Complexity::complex_;
  const Scenario s = generate_scenario(3, params);
  const std::string path = "/tmp/cellforge_test_scenario.json";
  save_scenario(s, path);
  const Scenario loaded = load_scenario(path);
  CHECK(scenario_to_json(s).dump() == scenario_to_json(loaded).dump());
}

TEST_CASE("infeasible generator params raise a generation error") {
  GeneratorParams params;
  params.region_width_min = params.region_width_max = 10.0;  // cannot fit
  params.conveyor_center_x_min = params.conveyor_center_x_max = -1.0;
  params.pallet_center_x_min = params.pallet_center_x_max = 1.0;
  CHECK_THROWS_AS(generate_scenario(1, params), GenerationError);
}

TEST_CASE("invalid params are rejected") {
  GeneratorParams params;
  params.min_boxes = 0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = GeneratorParams{};
  params.max_boxes = 5;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
