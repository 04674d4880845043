#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cellforge/common.hpp"
#include "cellforge/model/types.hpp"

namespace cellforge::world {

struct Disc {
  Vec2 center;
  double radius = 0.0;
};

struct Rect {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  bool contains(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool contains_strict(Vec2 p) const {
    return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y;
  }
  bool overlaps(const Rect& o) const {
    return min.x < o.max.x && o.min.x < max.x && min.y < o.max.y && o.min.y < max.y;
  }
};

struct Obstacle {
  std::variant<Disc, Rect> shape;

  void validate() const;
};

struct BoxSpec {
  Vec2 size;    // m
  double mass = 0.0;  // kg
};

enum class Complexity { simple, complex_ };

// Planar palletization world: the fixed parameters of one task instance.
struct Scenario {
  std::vector<Obstacle> obstacles;
  Rect conveyor_region;
  Rect pallet_region;
  std::vector<BoxSpec> boxes;
  model::Pose2 pick_pose;
  std::vector<model::Pose2> place_poses;
  std::uint64_t seed = 0;
  Complexity complexity = Complexity::simple;

  void validate() const;
};

// Pose sequence alternating pick and place, with the carried box mass and
// footprint per pose (zero/empty when moving unloaded).
struct TaskSequence {
  std::vector<model::Pose2> poses;
  std::vector<double> payload_mass;
  std::vector<Vec2> payload_size;

  std::size_t n_p() const { return poses.size(); }
};

struct GeneratorParams {
  Complexity complexity = Complexity::simple;
  int min_boxes = 1;
  int max_boxes = 4;
  double box_size_min = 0.05;
  double box_size_max = 0.18;
  double box_mass_min = 0.2;
  double box_mass_max = 3.0;
  // region geometry draws
  double region_width_min = 0.5;
  double region_width_max = 0.9;
  double region_height_min = 0.25;
  double region_height_max = 0.45;
  double conveyor_center_x_min = -1.6;
  double conveyor_center_x_max = -1.0;
  double pallet_center_x_min = 1.0;
  double pallet_center_x_max = 1.6;
  double region_center_y_min = -0.25;
  double region_center_y_max = 0.25;
  double base_clearance = 0.15;  // keep-out disc around the robot base
  // complex-class pillars
  int min_pillars = 1;
  int max_pillars = 3;
  double pillar_radius_min = 0.04;
  double pillar_radius_max = 0.10;
  double pillar_dist_min = 0.25;
  double pillar_dist_max = 0.60;  // "close to the base position"
  double pose_clearance = 0.18;   // pillars stay clear of task poses
  int max_attempts = 1000;

  void validate() const;
};

// Deterministic function of (seed, params); throws GenerationError when the
// layout constraints cannot be met within max_attempts.
Scenario generate_scenario(std::uint64_t seed, const GeneratorParams& params);

// Interleaved [pick, place_1, pick, place_2, ...]; payload set on place poses.
TaskSequence task_sequence(const Scenario& s);

}  // namespace cellforge::world
