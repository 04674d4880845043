#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cellforge/model/types.hpp"
#include "cellforge/world/scenario.hpp"

namespace cellforge::world {

// Carried payload: mass plus the box footprint centered at the end effector.
struct Payload {
  double mass = 0.0;
  Vec2 box_size{0.0, 0.0};

  bool carried() const { return mass > 0.0; }
  static Payload none() { return {}; }
};

// Preprocessed scenario geometry for repeated configuration checks. Link
// capsules (segment + clearance radius) are tested against obstacles; the
// bare link segments must stay out of the conveyor/pallet interiors, which
// are shrunk by a small margin so poses on the region boundary stay reachable
// under the IK tolerance.
class CollisionScene {
 public:
  static constexpr double kDefaultLinkClearance = 0.05;  // m
  static constexpr double kRegionMargin = 5e-3;          // m

  CollisionScene(const Scenario& s, double link_clearance = kDefaultLinkClearance);

  double link_clearance() const { return link_clearance_; }

  // Capsule around segment a-b against obstacles, plus bare segment against
  // the shrunk region interiors.
  bool segment_blocked(Vec2 a, Vec2 b) const;

  // Axis-aligned box footprint against obstacles only.
  bool box_blocked(Vec2 center, Vec2 size) const;

  // Batched variant over n segments; sets flags[i] = 1 where blocked. Uses
  // the disc-distance kernel across samples; rectangles are checked per
  // element with the same scalar predicates as segment_blocked.
  void segment_blocked_batch(const double* ax, const double* ay,
                             const double* bx, const double* by, std::size_t n,
                             std::uint8_t* flags) const;

 private:
  std::vector<Disc> discs_;
  std::vector<Rect> rect_obstacles_;
  std::vector<Rect> regions_;  // shrunk interiors
  double link_clearance_;
};

// True iff any link capsule or the carried box footprint hits an obstacle, or
// a link segment enters the conveyor/pallet interiors. q need not be
// canonical; the check wraps each component first.
bool collides(const model::Composition& comp, std::span<const double> q,
              const Scenario& s, const Payload& payload);

// Same predicate against a prebuilt scene (avoids re-deriving the geometry in
// inner loops).
bool collides(const model::Composition& comp, std::span<const double> q,
              const CollisionScene& scene, const Payload& payload);

}  // namespace cellforge::world
