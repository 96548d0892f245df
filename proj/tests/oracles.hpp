#pragma once

#include "voxsim/programs.hpp"
#include "voxsim/scene.hpp"

#include <algorithm>
#include <cmath>

namespace vtest {

using namespace voxsim;

// Straight segment from the origin against an axis-aligned rectangle in the
// ground plane (x, z), both grown by the ball's radius.
inline bool segment_hits(double dx, double dz, double x0, double x1, double z0, double z1) {
  double t0 = 0.0, t1 = 1.0;
  auto slab = [&](double d, double lo, double hi) {
    if (std::abs(d) < 1e-15) return lo < 0.0 && 0.0 < hi;
    double a = lo / d, b = hi / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    return t0 < t1;
  };
  return slab(dx, x0, x1) && slab(dz, z0, z1);
}

// Distance from p to a planar rectangle, measured in the rectangle's frame.
inline double point_to_patch(const Vec3& p, const SurfaceRegion& r) {
  Vec3 d = p - r.center;
  double u = std::clamp(d.dot(r.u_axis), -0.5 * r.extents.x(), 0.5 * r.extents.x());
  double v = std::clamp(d.dot(r.v_axis), -0.5 * r.extents.y(), 0.5 * r.extents.y());
  return (p - r.point_at(Vec2(u, v))).norm();
}

struct WallOracle {
  double acceptance;
  double mean_deg;
};

// Brute force over a direction grid and a distance grid, both uniform like
// the sampler.
inline WallOracle wall_oracle(const Scene& s) {
  Aabb wall = world_region(s, "wall-1").hull.bounds();
  double r = 0.5 * s.dimensions("ball-1").x();
  Vec3 c = s.instance("ball-1").pose.position;
  double x0 = wall.lo.x() - r - c.x(), x1 = wall.hi.x() + r - c.x();
  double z0 = wall.lo.z() - r - c.z(), z1 = wall.hi.z() + r - c.z();
  double sx = 0.0, sz = 0.0, accepted = 0.0, total = 0.0;
  for (int i = 0; i < 3600; ++i) {
    double deg = 0.1 * i;
    Vec3 h = heading(deg);
    for (int j = 0; j <= 190; ++j) {
      double d = 0.1 + 0.01 * j;
      total += 1.0;
      if (segment_hits(h.x() * d, h.z() * d, x0, x1, z0, z1)) continue;
      accepted += 1.0;
      sx += std::cos(deg_to_rad(deg));
      sz += std::sin(deg_to_rad(deg));
    }
  }
  double mean = rad_to_deg(std::atan2(sz, sx));
  if (mean < 0) mean += 360.0;
  return {accepted / total, mean};
}

}  // namespace vtest
