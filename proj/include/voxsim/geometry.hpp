#pragma once

#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace voxsim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using Index3 = Eigen::Vector3i;

inline const Vec3 kWorldUp = Vec3::UnitY();

double deg_to_rad(double deg);
double rad_to_deg(double rad);

/// One of the six object-frame directions, e.g. "+Y" or "-X".
struct SignedAxis {
  int axis = 1;  // 0 = X, 1 = Y, 2 = Z
  int sign = 1;  // +1 or -1

  Vec3 vector() const;
  SignedAxis opposite() const { return {axis, -sign}; }
  std::string str() const;
  static std::optional<SignedAxis> parse(const std::string& text);

  bool operator==(const SignedAxis&) const = default;
};

struct Pose {
  Vec3 position = Vec3::Zero();
  Quat rotation = Quat::Identity();

  Vec3 apply(const Vec3& local) const { return position + rotation * local; }
  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;
};

/// Euler angles in degrees, applied about world X, then Y, then Z.
Quat quat_from_euler_deg(const Vec3& deg);
/// Angle of the rotation taking a to b, radians in [0, pi].
double rotation_angle(const Quat& a, const Quat& b);

struct Aabb {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();

  Vec3 center() const { return 0.5 * (lo + hi); }
  Vec3 size() const { return hi - lo; }
  double volume() const;
  Aabb expanded(double margin) const;
  bool contains(const Vec3& p, double eps = 0.0) const;
  double distance_to(const Vec3& p) const;
  bool operator==(const Aabb& o) const { return lo == o.lo && hi == o.hi; }
};

/// Oriented box. The columns of `axes` are the box's unit axes in world frame.
struct Box {
  Vec3 center = Vec3::Zero();
  Mat3 axes = Mat3::Identity();
  Vec3 half = Vec3::Constant(0.5);

  static Box from_aabb(const Aabb& box);

  std::array<Vec3, 8> corners() const;
  Aabb bounds() const;
  bool is_axis_aligned(double tol = 1e-9) const;
  Vec3 to_local(const Vec3& p) const { return axes.transpose() * (p - center); }
  bool contains(const Vec3& p, double eps = 0.0) const;
  double volume() const { return 8.0 * half.prod(); }
  /// Closest distance from p to the solid box (0 inside).
  double distance_to(const Vec3& p) const;
};

/// Largest separating-axis gap between two boxes (15 candidate axes).
/// Positive means the boxes are apart by at least that much, negative is a
/// penetration depth.
double separation(const Box& a, const Box& b);

enum class Contact { separate, touching, overlapping };

Contact contact(const Box& a, const Box& b, double eps);
/// Pairwise contact over two unions of boxes; overlap dominates touch.
Contact contact(const std::vector<Box>& a, const std::vector<Box>& b, double eps);

/// Box minus an inner box, split into at most six disjoint boxes sharing the
/// outer box's axes. `inner` must share the outer box's axes.
std::vector<Box> subtract_inner(const Box& outer, const Box& inner);

/// Occupancy grid on the world lattice: cell i spans [i*res, (i+1)*res) on
/// every axis, so grids built at equal resolution line up cell for cell.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(double resolution, Index3 origin, Index3 dims);

  double resolution() const { return resolution_; }
  const Index3& origin() const { return origin_; }
  const Index3& dims() const { return dims_; }

  bool occupied(const Index3& cell) const;
  void set(const Index3& cell, bool value);
  std::size_t count() const;
  double volume() const;
  bool empty() const { return count() == 0; }

  /// Calls fn(cell) for every occupied cell, in lattice order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (int k = 0; k < dims_.z(); ++k)
      for (int j = 0; j < dims_.y(); ++j)
        for (int i = 0; i < dims_.x(); ++i)
          if (cells_[flat(i, j, k)]) fn(Index3(origin_.x() + i, origin_.y() + j, origin_.z() + k));
  }

 private:
  std::size_t flat(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.y()) * static_cast<std::size_t>(k));
  }

  double resolution_ = 0.01;
  Index3 origin_ = Index3::Zero();
  Index3 dims_ = Index3::Zero();
  std::vector<std::uint8_t> cells_;
};

/// Cells whose centers lie in `solid` and not in `carve`, each box taken
/// half-open, [-half, half), along its own axes.
VoxelGrid voxelize(const Box& solid, const std::optional<Box>& carve, double resolution);

}  // namespace voxsim
