#include "cellforge/world/collision.hpp"

#include <algorithm>
#include <cmath>

#include "cellforge/kernels/kernels.hpp"
#include "cellforge/model/kinematics.hpp"

namespace cellforge::world {

namespace {

double point_segment_dist_sq(Vec2 p, Vec2 a, Vec2 b) {
  double out;
  kernels::scalar::point_segment_dist_sq(p.x, p.y, &a.x, &a.y, &b.x, &b.y, 1, &out);
  return out;
}

double seg_seg_dist_sq(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  // Proper intersection -> 0; otherwise min over endpoint-to-segment.
  const auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 &&
      o3 != 0 && o4 != 0)
    return 0.0;
  double m = point_segment_dist_sq(c, a, b);
  m = std::min(m, point_segment_dist_sq(d, a, b));
  m = std::min(m, point_segment_dist_sq(a, c, d));
  m = std::min(m, point_segment_dist_sq(b, c, d));
  return m;
}

double seg_rect_dist_sq(Vec2 a, Vec2 b, const Rect& r) {
  if (r.contains(a) || r.contains(b)) return 0.0;
  const Vec2 c00{r.min.x, r.min.y}, c10{r.max.x, r.min.y};
  const Vec2 c01{r.min.x, r.max.y}, c11{r.max.x, r.max.y};
  double m = seg_seg_dist_sq(a, b, c00, c10);
  m = std::min(m, seg_seg_dist_sq(a, b, c10, c11));
  m = std::min(m, seg_seg_dist_sq(a, b, c11, c01));
  m = std::min(m, seg_seg_dist_sq(a, b, c01, c00));
  return m;
}

// Does segment a-b pass through the open interior of r? Slab-clips the
// segment and tests the midpoint of the clipped span, so touching the
// boundary does not count.
bool segment_enters_rect(Vec2 a, Vec2 b, const Rect& r) {
  if (r.contains_strict(a) || r.contains_strict(b)) return true;
  const double dx = b.x - a.x, dy = b.y - a.y;
  double t0 = 0.0, t1 = 1.0;
  const auto clip = [&](double p, double q) {
    // p * t <= q
    if (p == 0.0) return q >= 0.0;
    const double t = q / p;
    if (p < 0.0) {
      if (t > t1) return false;
      if (t > t0) t0 = t;
    } else {
      if (t < t0) return false;
      if (t < t1) t1 = t;
    }
    return true;
  };
  if (!clip(-dx, a.x - r.min.x)) return false;
  if (!clip(dx, r.max.x - a.x)) return false;
  if (!clip(-dy, a.y - r.min.y)) return false;
  if (!clip(dy, r.max.y - a.y)) return false;
  if (t1 <= t0) return false;
  const double tm = 0.5 * (t0 + t1);
  return r.contains_strict({a.x + tm * dx, a.y + tm * dy});
}

double point_rect_dist_sq(Vec2 p, const Rect& r) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return dx * dx + dy * dy;
}

Rect shrink(const Rect& r, double m) {
  Rect out{{r.min.x + m, r.min.y + m}, {r.max.x - m, r.max.y - m}};
  if (out.min.x > out.max.x) out.min.x = out.max.x = 0.5 * (r.min.x + r.max.x);
  if (out.min.y > out.max.y) out.min.y = out.max.y = 0.5 * (r.min.y + r.max.y);
  return out;
}

}  // namespace

void Obstacle::validate() const {
  if (const auto* d = std::get_if<Disc>(&shape)) {
    if (!(d->radius > 0.0) || !std::isfinite(d->radius) ||
        !std::isfinite(d->center.x) || !std::isfinite(d->center.y))
      throw std::invalid_argument("disc obstacle needs finite center and radius > 0");
  } else {
    const auto& r = std::get<Rect>(shape);
    if (!(r.min.x < r.max.x) || !(r.min.y < r.max.y))
      throw std::invalid_argument("rect obstacle needs min < max componentwise");
  }
}

CollisionScene::CollisionScene(const Scenario& s, double link_clearance)
    : link_clearance_(link_clearance) {
  for (const auto& o : s.obstacles) {
    if (const auto* d = std::get_if<Disc>(&o.shape))
      discs_.push_back(*d);
    else
      rect_obstacles_.push_back(std::get<Rect>(o.shape));
  }
  regions_.push_back(shrink(s.conveyor_region, kRegionMargin));
  regions_.push_back(shrink(s.pallet_region, kRegionMargin));
}

bool CollisionScene::segment_blocked(Vec2 a, Vec2 b) const {
  for (const auto& d : discs_) {
    const double reach = d.radius + link_clearance_;
    if (point_segment_dist_sq(d.center, a, b) < reach * reach) return true;
  }
  for (const auto& r : rect_obstacles_) {
    if (seg_rect_dist_sq(a, b, r) < link_clearance_ * link_clearance_) return true;
  }
  for (const auto& r : regions_) {
    if (segment_enters_rect(a, b, r)) return true;
  }
  return false;
}

bool CollisionScene::box_blocked(Vec2 center, Vec2 size) const {
  const Rect box{{center.x - 0.5 * size.x, center.y - 0.5 * size.y},
                 {center.x + 0.5 * size.x, center.y + 0.5 * size.y}};
  for (const auto& d : discs_) {
    if (point_rect_dist_sq(d.center, box) < d.radius * d.radius) return true;
  }
  for (const auto& r : rect_obstacles_) {
    if (box.overlaps(r)) return true;
  }
  return false;
}

void CollisionScene::segment_blocked_batch(const double* ax, const double* ay,
                                           const double* bx, const double* by,
                                           std::size_t n,
                                           std::uint8_t* flags) const {
  std::vector<double> d2(n);
  for (const auto& d : discs_) {
    kernels::point_segment_dist_sq(d.center.x, d.center.y, ax, ay, bx, by, n,
                                   d2.data());
    const double reach = d.radius + link_clearance_;
    const double reach2 = reach * reach;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] < reach2) flags[i] = 1;
    }
  }
  if (!rect_obstacles_.empty() || !regions_.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (flags[i]) continue;
      const Vec2 a{ax[i], ay[i]}, b{bx[i], by[i]};
      for (const auto& r : rect_obstacles_) {
        if (seg_rect_dist_sq(a, b, r) < link_clearance_ * link_clearance_) {
          flags[i] = 1;
          break;
        }
      }
      if (flags[i]) continue;
      for (const auto& r : regions_) {
        if (segment_enters_rect(a, b, r)) {
          flags[i] = 1;
          break;
        }
      }
    }
  }
}

bool collides(const model::Composition& comp, std::span<const double> q,
              const CollisionScene& scene, const Payload& payload) {
  std::vector<Vec2> pts;
  model::chain_points(comp, q, pts);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (scene.segment_blocked(pts[i], pts[i + 1])) return true;
  }
  if (payload.carried() && scene.box_blocked(pts.back(), payload.box_size))
    return true;
  return false;
}

bool collides(const model::Composition& comp, std::span<const double> q,
              const Scenario& s, const Payload& payload) {
  return collides(comp, q, CollisionScene(s), payload);
}

}  // namespace cellforge::world
