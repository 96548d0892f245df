#pragma once

#include "voxsim/geometry.hpp"
#include "voxsim/voxicon.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voxsim {

/// Engine tolerances. Overridable from a config file.
struct Tolerances {
  double contact = 1e-3;         // meters
  double orientation_deg = 5.0;  // "vertical" / "horizontal" classification
  double voxel_resolution = 0.01;

  bool operator==(const Tolerances&) const = default;
};

struct SceneInstance {
  std::string id;
  std::string voxeme;
  Pose pose;
  Vec3 scale = Vec3::Ones();
  std::optional<std::string> attached_to;
  Pose attach_offset;  // pose in the parent's frame while attached
};

/// Abstract point agent; grasped instances ride along with it.
struct Agent {
  std::string id;
  Pose pose;
};

enum class Representation { oriented_box, voxel_grid };

/// Closed world-frame region of one instance: its box, plus the cavity that
/// is carved out of the material.
struct RegionApprox {
  Box hull;
  std::optional<Box> cavity;
  Representation representation = Representation::oriented_box;
  double resolution = 0.01;

  /// The hull minus the cavity, as disjoint boxes.
  std::vector<Box> material() const;
  VoxelGrid voxels(bool carve_cavity) const;
  RegionApprox as_voxels(double res) const;
};

/// Planar patch; u and v span the plane, extents are full side lengths.
struct SurfaceRegion {
  Vec3 center = Vec3::Zero();
  Vec3 normal = Vec3::UnitY();
  Vec3 u_axis = Vec3::UnitX();
  Vec3 v_axis = Vec3::UnitZ();
  Vec2 extents = Vec2::Zero();

  double distance_to(const Vec3& p) const;
  Vec3 point_at(const Vec2& uv) const { return center + uv.x() * u_axis + uv.y() * v_axis; }
};

/// World state snapshot. Edits return a new scene.
class Scene {
 public:
  Scene();
  explicit Scene(std::shared_ptr<const Voxicon> voxicon, Tolerances tol = {});

  const Voxicon& voxicon() const { return *voxicon_; }
  const std::shared_ptr<const Voxicon>& voxicon_ptr() const { return voxicon_; }
  const Tolerances& tolerances() const { return tol_; }
  double ground_height() const { return ground_; }

  const std::map<std::string, SceneInstance, std::less<>>& instances() const { return instances_; }
  const std::map<std::string, Agent, std::less<>>& agents() const { return agents_; }
  bool has(std::string_view id) const { return instances_.count(id) != 0; }
  bool is_agent(std::string_view id) const { return agents_.count(id) != 0; }
  const SceneInstance& instance(std::string_view id) const;
  const Agent& agent(std::string_view id) const;
  const Voxeme& voxeme_of(std::string_view id) const;
  /// Default dimensions times scale.
  Vec3 dimensions(std::string_view id) const;
  /// Pose of an instance or agent.
  Pose pose_of(std::string_view id) const;
  /// Instances attached (transitively) to `id`.
  std::vector<std::string> descendants(std::string_view id) const;

  Scene with_tolerances(Tolerances tol) const;
  Scene with_ground(double height) const;
  Scene with_instance(SceneInstance inst) const;
  Scene with_agent(Agent agent) const;
  /// Moves an instance or agent; attached descendants follow.
  Scene with_pose(std::string_view id, const Pose& pose) const;
  /// Attaches child to parent (instance or agent), keeping the current poses.
  Scene attached(std::string_view child, std::string_view parent) const;
  Scene detached(std::string_view child) const;

 private:
  friend Scene load_scene(std::string_view, std::shared_ptr<const Voxicon>, Tolerances);
  void refresh_children(std::string_view parent);

  std::shared_ptr<const Voxicon> voxicon_;
  Tolerances tol_;
  double ground_ = 0.0;
  std::map<std::string, SceneInstance, std::less<>> instances_;
  std::map<std::string, Agent, std::less<>> agents_;
};

/// Rotation used for region geometry: components about continuous rotational
/// symmetry axes are dropped (a ball's box never tilts).
Quat region_rotation(const Voxeme& v, const Quat& rotation);

RegionApprox world_region(const Scene& s, std::string_view id);
/// Region the instance would occupy at `pose`.
RegionApprox region_at(const Scene& s, std::string_view id, const Pose& pose);

struct SurfaceSelector {
  enum class Kind { top, vertical_face, interior_bottom };
  Kind kind = Kind::top;
  Vec3 reference = Vec3::Zero();  // vertical_face: pick the face nearest this point

  static SurfaceSelector top() { return {Kind::top, Vec3::Zero()}; }
  static SurfaceSelector vertical_face(const Vec3& near) { return {Kind::vertical_face, near}; }
  static SurfaceSelector interior_bottom() { return {Kind::interior_bottom, Vec3::Zero()}; }
};

SurfaceRegion select_surface(const Scene& s, std::string_view id, const SurfaceSelector& selector);

/// Drops an unattached instance straight down onto the highest support below it.
Scene settle(const Scene& s, std::string_view id);

/// True when every habitat's orientation constraint holds at `rotation`.
bool orientation_satisfied(const Voxeme& v, const Quat& rotation);

/// Ids of habitats whose orientation or support constraint fails.
std::vector<std::string> check_habitat(const Scene& s, std::string_view id);

/// True when the material of a and b overlaps by more than the contact tolerance.
bool interpenetrates(const Scene& s, std::string_view a, std::string_view b);
/// Material contact between two instances.
Contact material_contact(const Scene& s, std::string_view a, std::string_view b);

/// Resting pose inside the container's cavity with the figure's longest
/// dimension along the opening axis, or nullopt when the cross-section does
/// not fit.
std::optional<Pose> fit_inside(const Scene& s, std::string_view figure, std::string_view container);
/// Same test for one fixed figure rotation.
std::optional<Pose> fit_inside_oriented(const Scene& s, std::string_view figure, std::string_view container,
                                        const Quat& rotation);

/// The 24 rotations that map the world axes onto the axes of `frame`.
std::vector<Quat> axis_aligned_rotations(const Quat& frame = Quat::Identity());

// scene/1 documents
Scene load_scene(std::string_view text, std::shared_ptr<const Voxicon> voxicon, Tolerances tol = {});
Scene load_scene_file(const std::filesystem::path& path, std::shared_ptr<const Voxicon> voxicon,
                      Tolerances tol = {});
std::string serialize(const Scene& s);

std::string_view stock_scene_text();

}  // namespace voxsim
