#include "voxsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace voxsim {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

Vec3 SignedAxis::vector() const {
  Vec3 v = Vec3::Zero();
  v[axis] = static_cast<double>(sign);
  return v;
}

std::string SignedAxis::str() const {
  std::string s(1, sign > 0 ? '+' : '-');
  s += static_cast<char>('X' + axis);
  return s;
}

std::optional<SignedAxis> SignedAxis::parse(const std::string& text) {
  if (text.size() != 2) return std::nullopt;
  int sign = 0;
  if (text[0] == '+') sign = 1;
  if (text[0] == '-') sign = -1;
  char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[1])));
  if (sign == 0 || c < 'X' || c > 'Z') return std::nullopt;
  return SignedAxis{c - 'X', sign};
}

Pose Pose::inverse() const {
  Quat inv = rotation.conjugate();
  return {-(inv * position), inv};
}

Pose Pose::operator*(const Pose& rhs) const {
  return {position + rotation * rhs.position, (rotation * rhs.rotation).normalized()};
}

Quat quat_from_euler_deg(const Vec3& deg) {
  Quat q = Eigen::AngleAxisd(deg_to_rad(deg.z()), Vec3::UnitZ()) *
           Eigen::AngleAxisd(deg_to_rad(deg.y()), Vec3::UnitY()) *
           Eigen::AngleAxisd(deg_to_rad(deg.x()), Vec3::UnitX());
  return q.normalized();
}

double rotation_angle(const Quat& a, const Quat& b) {
  double d = std::abs(a.normalized().dot(b.normalized()));
  return 2.0 * std::acos(std::clamp(d, 0.0, 1.0));
}

double Aabb::volume() const { return size().cwiseMax(0.0).prod(); }

Aabb Aabb::expanded(double margin) const {
  return {lo.array() - margin, hi.array() + margin};
}

bool Aabb::contains(const Vec3& p, double eps) const {
  return (p.array() >= lo.array() - eps).all() && (p.array() <= hi.array() + eps).all();
}

double Aabb::distance_to(const Vec3& p) const {
  Vec3 d = (lo - p).cwiseMax(p - hi).cwiseMax(0.0);
  return d.norm();
}

Box Box::from_aabb(const Aabb& box) {
  Box b;
  b.center = box.center();
  b.half = 0.5 * box.size();
  return b;
}

std::array<Vec3, 8> Box::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    Vec3 s((i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0);
    out[i] = center + axes * s.cwiseProduct(half);
  }
  return out;
}

Aabb Box::bounds() const {
  Vec3 extent = axes.cwiseAbs() * half;
  return {center - extent, center + extent};
}

bool Box::is_axis_aligned(double tol) const {
  for (int c = 0; c < 3; ++c) {
    int big = 0;
    for (int r = 0; r < 3; ++r) {
      double v = std::abs(axes(r, c));
      if (std::abs(v - 1.0) <= tol) {
        ++big;
      } else if (v > tol) {
        return false;
      }
    }
    if (big != 1) return false;
  }
  return true;
}

bool Box::contains(const Vec3& p, double eps) const {
  Vec3 local = to_local(p);
  return (local.cwiseAbs().array() <= half.array() + eps).all();
}

double Box::distance_to(const Vec3& p) const {
  Vec3 local = to_local(p);
  Vec3 d = (local.cwiseAbs() - half).cwiseMax(0.0);
  return d.norm();
}

double separation(const Box& a, const Box& b) {
  const Vec3 t = b.center - a.center;
  double best = -std::numeric_limits<double>::infinity();
  auto test = [&](const Vec3& axis) {
    double n = axis.norm();
    if (n < 1e-9) return;
    Vec3 l = axis / n;
    double ra = (a.axes.transpose() * l).cwiseAbs().dot(a.half);
    double rb = (b.axes.transpose() * l).cwiseAbs().dot(b.half);
    best = std::max(best, std::abs(t.dot(l)) - ra - rb);
  };
  for (int i = 0; i < 3; ++i) test(a.axes.col(i));
  for (int i = 0; i < 3; ++i) test(b.axes.col(i));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) test(a.axes.col(i).cross(b.axes.col(j)));
  return best;
}

Contact contact(const Box& a, const Box& b, double eps) {
  double gap = separation(a, b);
  if (gap > eps) return Contact::separate;
  if (gap < -eps) return Contact::overlapping;
  return Contact::touching;
}

Contact contact(const std::vector<Box>& a, const std::vector<Box>& b, double eps) {
  Contact result = Contact::separate;
  for (const Box& pa : a) {
    for (const Box& pb : b) {
      Contact c = contact(pa, pb, eps);
      if (c == Contact::overlapping) return c;
      if (c == Contact::touching) result = c;
    }
  }
  return result;
}

std::vector<Box> subtract_inner(const Box& outer, const Box& inner) {
  // Work in the outer box's frame where both are axis-aligned.
  Vec3 c = outer.to_local(inner.center);
  Vec3 olo = -outer.half, ohi = outer.half;
  Vec3 ilo = (c - inner.half).cwiseMax(olo);
  Vec3 ihi = (c + inner.half).cwiseMin(ohi);

  std::vector<Box> parts;
  auto emit = [&](Vec3 lo, Vec3 hi) {
    if (((hi - lo).array() <= 1e-12).any()) return;
    Box b;
    b.axes = outer.axes;
    b.half = 0.5 * (hi - lo);
    b.center = outer.center + outer.axes * (0.5 * (lo + hi));
    parts.push_back(b);
  };
  if (((ihi - ilo).array() <= 0.0).any()) {
    parts.push_back(outer);
    return parts;
  }
  // X slabs span everything; Y slabs span the cavity's X range; Z slabs span
  // the cavity's X and Y range.
  emit({olo.x(), olo.y(), olo.z()}, {ilo.x(), ohi.y(), ohi.z()});
  emit({ihi.x(), olo.y(), olo.z()}, {ohi.x(), ohi.y(), ohi.z()});
  emit({ilo.x(), olo.y(), olo.z()}, {ihi.x(), ilo.y(), ohi.z()});
  emit({ilo.x(), ihi.y(), olo.z()}, {ihi.x(), ohi.y(), ohi.z()});
  emit({ilo.x(), ilo.y(), olo.z()}, {ihi.x(), ihi.y(), ilo.z()});
  emit({ilo.x(), ilo.y(), ihi.z()}, {ihi.x(), ihi.y(), ohi.z()});
  return parts;
}

VoxelGrid::VoxelGrid(double resolution, Index3 origin, Index3 dims)
    : resolution_(resolution), origin_(origin), dims_(dims.cwiseMax(0)) {
  if (!(resolution > 0.0)) throw std::invalid_argument("voxel resolution must be positive");
  cells_.assign(static_cast<std::size_t>(dims_.x()) * dims_.y() * dims_.z(), 0);
}

bool VoxelGrid::occupied(const Index3& cell) const {
  Index3 r = cell - origin_;
  if ((r.array() < 0).any() || (r.array() >= dims_.array()).any()) return false;
  return cells_[flat(r.x(), r.y(), r.z())] != 0;
}

void VoxelGrid::set(const Index3& cell, bool value) {
  Index3 r = cell - origin_;
  if ((r.array() < 0).any() || (r.array() >= dims_.array()).any())
    throw std::out_of_range("voxel cell outside grid");
  cells_[flat(r.x(), r.y(), r.z())] = value ? 1 : 0;
}

std::size_t VoxelGrid::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double VoxelGrid::volume() const {
  return static_cast<double>(count()) * resolution_ * resolution_ * resolution_;
}

VoxelGrid voxelize(const Box& solid, const std::optional<Box>& carve, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("voxel resolution must be positive");
  // Half-open in each box's own frame, [-half, half), so boxes that share a
  // face never share a cell. The snap absorbs rounding at lattice-aligned faces.
  const double snap = 1e-9 * resolution;
  auto inside = [snap](const Box& b, const Vec3& p) {
    Vec3 l = b.to_local(p);
    return (l.array() >= -b.half.array() - snap).all() && (l.array() < b.half.array() - snap).all();
  };
  Aabb bb = solid.bounds();
  Index3 lo, hi;
  for (int i = 0; i < 3; ++i) {
    lo[i] = static_cast<int>(std::floor(bb.lo[i] / resolution));
    hi[i] = static_cast<int>(std::floor(bb.hi[i] / resolution));
  }
  VoxelGrid grid(resolution, lo, hi - lo + Index3::Ones());
  for (int k = lo.z(); k <= hi.z(); ++k) {
    for (int j = lo.y(); j <= hi.y(); ++j) {
      for (int i = lo.x(); i <= hi.x(); ++i) {
        Vec3 p((i + 0.5) * resolution, (j + 0.5) * resolution, (k + 0.5) * resolution);
        if (!inside(solid, p) || (carve && inside(*carve, p))) continue;
        grid.set({i, j, k}, true);
      }
    }
  }
  return grid;
}

}  // namespace voxsim
