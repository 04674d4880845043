#include "cellforge/world/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cellforge/rng.hpp"
#include "cellforge/world/collision.hpp"

namespace cellforge::world {

namespace {

double dist_point_rect(Vec2 p, const Rect& r) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::hypot(dx, dy);
}

}  // namespace

void GeneratorParams::validate() const {
  if (min_boxes < 1 || max_boxes > 4 || min_boxes > max_boxes)
    throw std::invalid_argument("box count range must satisfy 1 <= min <= max <= 4");
  auto range_ok = [](double lo, double hi) { return lo > 0.0 && lo <= hi; };
  if (!range_ok(box_size_min, box_size_max) || !range_ok(box_mass_min, box_mass_max) ||
      !range_ok(region_width_min, region_width_max) ||
      !range_ok(region_height_min, region_height_max) ||
      !range_ok(pillar_radius_min, pillar_radius_max))
    throw std::invalid_argument("generator ranges must be positive and ordered");
  if (min_pillars < 1 || max_pillars < min_pillars)
    throw std::invalid_argument("pillar count range invalid");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (conveyor_center_x_max + 0.5 * region_width_min >= -base_clearance &&
      conveyor_center_x_max >= 0.0)
    throw std::invalid_argument("conveyor placement range must stay left of the base");
}

void Scenario::validate() const {
  for (const auto& o : obstacles) o.validate();
  if (!(conveyor_region.min.x < conveyor_region.max.x) ||
      !(conveyor_region.min.y < conveyor_region.max.y) ||
      !(pallet_region.min.x < pallet_region.max.x) ||
      !(pallet_region.min.y < pallet_region.max.y))
    throw std::invalid_argument("scenario regions need min < max componentwise");
  if (boxes.empty() || boxes.size() > 4)
    throw std::invalid_argument("scenario needs between 1 and 4 boxes");
  if (boxes.size() != place_poses.size())
    throw std::invalid_argument("number of boxes must equal number of place poses");
  if (conveyor_region.overlaps(pallet_region))
    throw std::invalid_argument("conveyor and pallet regions overlap");
  const Vec2 origin{0.0, 0.0};
  if (conveyor_region.contains(origin) || pallet_region.contains(origin))
    throw std::invalid_argument("base origin lies inside a region");
  if (!conveyor_region.contains(pick_pose.position()))
    throw std::invalid_argument("pick pose must lie within the conveyor region");
  for (const auto& p : place_poses) {
    if (!pallet_region.contains(p.position()))
      throw std::invalid_argument("place poses must lie within the pallet region");
  }
  for (const auto& b : boxes) {
    if (!(b.size.x > 0.0) || !(b.size.y > 0.0) || !(b.mass > 0.0))
      throw std::invalid_argument("boxes need positive size and mass");
  }
}

Scenario generate_scenario(std::uint64_t seed, const GeneratorParams& params) {
  params.validate();
  Rng rng(derive_seed(seed, "scenario-gen"));

  Scenario s;
  s.seed = seed;
  s.complexity = params.complexity;

  // 1. regions: conveyor left of the base, pallet right; redraw on overlap
  //    with each other or the base keep-out disc
  bool placed = false;
  for (int attempt = 0; attempt < params.max_attempts && !placed; ++attempt) {
    const double cw = rng.uniform(params.region_width_min, params.region_width_max);
    const double ch = rng.uniform(params.region_height_min, params.region_height_max);
    const double ccx = rng.uniform(params.conveyor_center_x_min, params.conveyor_center_x_max);
    const double ccy = rng.uniform(params.region_center_y_min, params.region_center_y_max);
    const double pw = rng.uniform(params.region_width_min, params.region_width_max);
    const double ph = rng.uniform(params.region_height_min, params.region_height_max);
    const double pcx = rng.uniform(params.pallet_center_x_min, params.pallet_center_x_max);
    const double pcy = rng.uniform(params.region_center_y_min, params.region_center_y_max);
    const Rect conv{{ccx - 0.5 * cw, ccy - 0.5 * ch}, {ccx + 0.5 * cw, ccy + 0.5 * ch}};
    const Rect pal{{pcx - 0.5 * pw, pcy - 0.5 * ph}, {pcx + 0.5 * pw, pcy + 0.5 * ph}};
    if (conv.overlaps(pal)) continue;
    const Vec2 origin{0.0, 0.0};
    if (dist_point_rect(origin, conv) < params.base_clearance) continue;
    if (dist_point_rect(origin, pal) < params.base_clearance) continue;
    s.conveyor_region = conv;
    s.pallet_region = pal;
    placed = true;
  }
  if (!placed)
    throw GenerationError("could not place regions within attempt budget");

  // 2. boxes
  const int n_boxes =
      static_cast<int>(rng.uniform_int(params.min_boxes, params.max_boxes));
  for (int b = 0; b < n_boxes; ++b) {
    BoxSpec box;
    box.size = {rng.uniform(params.box_size_min, params.box_size_max),
                rng.uniform(params.box_size_min, params.box_size_max)};
    box.mass = rng.uniform(params.box_mass_min, params.box_mass_max);
    s.boxes.push_back(box);
  }

  // 3. task poses: pick on the conveyor edge facing the base, places spread
  //    along the pallet edge facing the base, oriented outward
  s.pick_pose = {s.conveyor_region.max.x,
                 0.5 * (s.conveyor_region.min.y + s.conveyor_region.max.y), 0.0};
  {
    const double y0 = s.pallet_region.min.y;
    const double y1 = s.pallet_region.max.y;
    for (int b = 0; b < n_boxes; ++b) {
      const double frac = (b + 1.0) / (n_boxes + 1.0);
      s.place_poses.push_back(
          {s.pallet_region.min.x, y0 + frac * (y1 - y0), kPi});
    }
  }

  // 4. complex class: disc pillars close to the base, clear of regions and poses
  if (params.complexity == Complexity::complex_) {
    const int n_pillars =
        static_cast<int>(rng.uniform_int(params.min_pillars, params.max_pillars));
    for (int p = 0; p < n_pillars; ++p) {
      bool ok = false;
      for (int attempt = 0; attempt < params.max_attempts && !ok; ++attempt) {
        const double r = rng.uniform(params.pillar_radius_min, params.pillar_radius_max);
        const double d = rng.uniform(params.pillar_dist_min, params.pillar_dist_max);
        const double ang = rng.uniform(0.0, kTwoPi);
        const Vec2 c{d * std::cos(ang), d * std::sin(ang)};
        if (d - r < params.base_clearance) continue;
        if (dist_point_rect(c, s.conveyor_region) < r + CollisionScene::kRegionMargin)
          continue;
        if (dist_point_rect(c, s.pallet_region) < r + CollisionScene::kRegionMargin)
          continue;
        const auto clear_of = [&](const model::Pose2& pose) {
          return std::hypot(c.x - pose.x, c.y - pose.y) >= r + params.pose_clearance;
        };
        if (!clear_of(s.pick_pose)) continue;
        if (!std::all_of(s.place_poses.begin(), s.place_poses.end(), clear_of))
          continue;
        s.obstacles.push_back(Obstacle{Disc{c, r}});
        ok = true;
      }
      if (!ok)
        throw GenerationError("could not place pillar within attempt budget");
    }
  }

  s.validate();
  return s;
}

TaskSequence task_sequence(const Scenario& s) {
  s.validate();
  TaskSequence seq;
  for (std::size_t b = 0; b < s.boxes.size(); ++b) {
    seq.poses.push_back(s.pick_pose);
    seq.payload_mass.push_back(0.0);
    seq.payload_size.push_back({0.0, 0.0});
    seq.poses.push_back(s.place_poses[b]);
    seq.payload_mass.push_back(s.boxes[b].mass);
    seq.payload_size.push_back(s.boxes[b].size);
  }
  return seq;
}

}  // namespace cellforge::world
