#pragma once

#include "voxsim/rcc.hpp"
#include "voxsim/scene.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace voxsim {

enum class Preposition { on, in };

std::string_view to_string(Preposition p);
std::optional<Preposition> parse_preposition(std::string_view word);

/// Where the figure has to end up relative to the ground, and how.
struct PlacementGoal {
  enum class Target { top, vertical_face, cavity, interior };

  Preposition prep = Preposition::on;
  std::string ground;
  Target target = Target::top;
  std::variant<SurfaceRegion, RegionApprox> region;
  RelationSet relations;
  bool required_support = true;
  bool allow_interpenetration = false;
  /// The figure is attached to the ground on release (no adhesion otherwise).
  bool attach_to_ground = false;
  /// Patch coordinates of the placement point; the patch center when absent.
  std::optional<Vec2> surface_point;
};

/// Picks the candidate an attribute selects on its sortal scale. Candidates
/// are instance ids; a tie within 1% of volume is an ambiguity error.
std::string resolve_attribute(const Scene& s, std::string_view adjective, const std::vector<std::string>& candidates);

PlacementGoal operationalize(Preposition prep, const Scene& s, std::string_view ground, std::string_view figure);

/// Pose for the figure satisfying the goal without disturbing anything else.
Pose plan_placement(const Scene& s, std::string_view figure, const PlacementGoal& goal);

/// Whether the goal relation holds between figure and ground in `s`.
bool goal_holds(const Scene& s, const PlacementGoal& goal, std::string_view figure);

/// Point of the figure that is measured against the goal region.
Vec3 reference_point(const Scene& s, const PlacementGoal& goal, std::string_view figure);

/// Zero when the goal holds, otherwise the distance from the figure's
/// reference point to the goal region (never below the contact tolerance).
double satisfaction_distance(const Scene& final_scene, const PlacementGoal& goal, std::string_view figure);

}  // namespace voxsim
