#include "voxsim/predicates.hpp"

#include "voxsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace voxsim {

std::string_view to_string(Preposition p) { return p == Preposition::on ? "on" : "in"; }

std::optional<Preposition> parse_preposition(std::string_view word) {
  if (word == "on") return Preposition::on;
  if (word == "in") return Preposition::in;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Attributes

std::string resolve_attribute(const Scene& s, std::string_view adjective, const std::vector<std::string>& candidates) {
  const Voxeme* attr = s.voxicon().find(adjective);
  if (!attr || attr->kind != VoxemeKind::attribute || !attr->scale)
    throw Error(ErrorKind::unknown_word, "'" + std::string(adjective) + "' is not an attribute");
  if (candidates.empty()) throw Error(ErrorKind::invalid_argument, "no candidates for '" + std::string(adjective) + "'");
  if (attr->scale->dimension != "volume")
    throw Error(ErrorKind::invalid_argument, "unsupported scale dimension '" + attr->scale->dimension + "'");

  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& id : candidates) ranked.emplace_back(s.dimensions(id).prod(), id);
  std::sort(ranked.begin(), ranked.end());
  if (!attr->scale->ascending) std::reverse(ranked.begin(), ranked.end());
  if (ranked.size() >= 2) {
    double a = ranked[0].first, b = ranked[1].first;
    if (std::abs(a - b) <= 0.01 * std::max(a, b))
      throw Error(ErrorKind::ambiguity, "'" + std::string(adjective) + "' cannot separate '" + ranked[0].second +
                                            "' from '" + ranked[1].second + "'");
  }
  return ranked[0].second;
}

// ---------------------------------------------------------------------------
// Goals

namespace {

// Half-width of a box measured along direction n.
double support_along(const Box& b, const Vec3& n) {
  double h = 0.0;
  for (int i = 0; i < 3; ++i) h += std::abs(n.dot(b.axes.col(i))) * b.half[i];
  return h;
}

bool faces_sideways(const Scene& s, std::string_view ground) {
  const Voxeme& v = s.voxeme_of(ground);
  if (!v.head || v.head->primitive != Primitive::sheet) return false;
  Vec3 dims = s.dimensions(ground);
  int thin = 0;
  dims.minCoeff(&thin);
  Vec3 normal = world_region(s, ground).hull.axes.col(thin);
  return std::abs(normal.dot(kWorldUp)) <= std::sin(deg_to_rad(s.tolerances().orientation_deg));
}

// Largest face of the ground's box; ties go to the face nearest `near`.
SurfaceRegion dominant_face(const Scene& s, std::string_view ground, const Vec3& near) {
  Box hull = world_region(s, ground).hull;
  std::optional<SurfaceRegion> best;
  double best_area = -1.0, best_dist = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign : {1, -1}) {
      SurfaceRegion p;
      int b = (axis + 1) % 3, c = (axis + 2) % 3;
      p.normal = sign * hull.axes.col(axis);
      p.center = hull.center + p.normal * hull.half[axis];
      p.u_axis = hull.axes.col(b);
      p.v_axis = hull.axes.col(c);
      p.extents = Vec2(2.0 * hull.half[b], 2.0 * hull.half[c]);
      double area = p.extents.prod(), dist = p.distance_to(near);
      if (area > best_area + 1e-12 || (std::abs(area - best_area) <= 1e-12 && dist < best_dist)) {
        best = p;
        best_area = area;
        best_dist = dist;
      }
    }
  }
  return *best;
}

}  // namespace

PlacementGoal operationalize(Preposition prep, const Scene& s, std::string_view ground, std::string_view figure) {
  s.instance(ground);
  s.instance(figure);
  if (ground == figure) throw Error(ErrorKind::invalid_argument, "figure and ground are both '" + std::string(ground) + "'");

  PlacementGoal g;
  g.prep = prep;
  g.ground = std::string(ground);
  const Vec3 figure_at = s.instance(figure).pose.position;
  const Voxeme& gv = s.voxeme_of(ground);

  if (prep == Preposition::on) {
    g.relations = {RCC8Relation::EC};
    if (faces_sideways(s, ground)) {
      g.target = PlacementGoal::Target::vertical_face;
      g.region = select_surface(s, ground, SurfaceSelector::vertical_face(figure_at));
      g.required_support = false;
      g.attach_to_ground = true;
    } else {
      g.target = PlacementGoal::Target::top;
      g.region = select_surface(s, ground, SurfaceSelector::top());
      g.required_support = true;
    }
    return g;
  }

  if (gv.concavity && affords(gv, "contain")) {
    RegionApprox cavity = world_region(s, ground);
    cavity.hull = *cavity.cavity;
    cavity.cavity.reset();
    g.target = PlacementGoal::Target::cavity;
    g.region = cavity;
    g.relations = {RCC8Relation::PO, RCC8Relation::TPP, RCC8Relation::NTPP};
    g.required_support = true;
  } else {
    g.target = PlacementGoal::Target::interior;
    g.region = world_region(s, ground);
    g.relations = {RCC8Relation::PO};
    g.required_support = false;
    g.allow_interpenetration = true;
    g.attach_to_ground = true;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Placement search

namespace {

struct Placer {
  const Scene& s;
  std::string figure;
  const PlacementGoal& goal;
  std::vector<std::string> movers;  // figure and whatever rides on it
  double eps;

  Placer(const Scene& scene, std::string_view fig, const PlacementGoal& g)
      : s(scene), figure(fig), goal(g), eps(scene.tolerances().contact) {
    movers = s.descendants(figure);
    movers.push_back(figure);
  }

  bool is_mover(const std::string& id) const { return std::find(movers.begin(), movers.end(), id) != movers.end(); }

  // Rotations to try: the current one, then axis-aligned ones by angle,
  // keeping only those the figure's habitats accept.
  std::vector<Quat> rotations(const Quat& frame) const {
    const Voxeme& v = s.voxeme_of(figure);
    const Quat current = s.instance(figure).pose.rotation;
    std::vector<Quat> all = axis_aligned_rotations(frame);
    std::stable_sort(all.begin(), all.end(), [&](const Quat& a, const Quat& b) {
      return rotation_angle(current, a) < rotation_angle(current, b) - 1e-9;
    });
    all.insert(all.begin(), current);
    std::vector<Quat> out;
    for (const Quat& q : all)
      if (orientation_satisfied(v, q)) out.push_back(q);
    return out;
  }

  // Patch coordinates, nearest the requested point first.
  std::vector<Vec2> patch_points(const SurfaceRegion& patch) const {
    Vec2 start = goal.surface_point.value_or(Vec2::Zero());
    std::vector<Vec2> pts{start};
    const int n = 6;
    for (int i = -n; i <= n; ++i)
      for (int j = -n; j <= n; ++j) {
        Vec2 uv(patch.extents.x() * 0.5 * i / n, patch.extents.y() * 0.5 * j / n);
        if ((uv - start).norm() > 1e-12) pts.push_back(uv);
      }
    std::stable_sort(pts.begin() + 1, pts.end(),
                     [&](const Vec2& a, const Vec2& b) { return (a - start).norm() < (b - start).norm() - 1e-12; });
    return pts;
  }

  // Scene with the figure moved to `pose`, attachments left alone.
  Scene at(const Pose& pose) const {
    const SceneInstance& inst = s.instance(figure);
    if (!inst.attached_to) return s.with_pose(figure, pose);
    return s.detached(figure).with_pose(figure, pose);
  }

  // Contact of the figure at `pose` against ground and third objects.
  bool clear_of_others(const Scene& trial) const {
    for (const auto& [id, other] : trial.instances()) {
      if (is_mover(id)) continue;
      if (id == goal.ground) continue;
      if (material_contact(trial, figure, id) == Contact::overlapping) return false;
    }
    return true;
  }

  // Lowest resting pose straight below `pose` over the material of others.
  Pose dropped(const Pose& pose) const {
    Aabb fb = region_at(s, figure, pose).hull.bounds();
    double support = s.ground_height();
    for (const auto& [id, other] : s.instances()) {
      if (is_mover(id)) continue;
      for (const Box& part : world_region(s, id).material()) {
        Aabb pb = part.bounds();
        bool under = pb.lo.x() < fb.hi.x() - eps && pb.hi.x() > fb.lo.x() + eps && pb.lo.z() < fb.hi.z() - eps &&
                     pb.hi.z() > fb.lo.z() + eps;
        if (under && pb.hi.y() <= fb.lo.y() + eps) support = std::max(support, pb.hi.y());
      }
    }
    Pose out = pose;
    out.position.y() -= fb.lo.y() - support;
    return out;
  }

  double ceiling() const {
    double top = s.ground_height();
    for (const auto& [id, other] : s.instances())
      if (!is_mover(id)) top = std::max(top, world_region(s, id).hull.bounds().hi.y());
    return top;
  }

  std::optional<Pose> on_top() const {
    const auto& patch = std::get<SurfaceRegion>(goal.region);
    const double high = ceiling() + s.dimensions(figure).norm() + 1.0;
    for (const Quat& q : rotations(Quat::Identity())) {
      for (const Vec2& uv : patch_points(patch)) {
        Vec3 p = patch.point_at(uv);
        Pose pose = dropped(Pose{Vec3(p.x(), high, p.z()), q});
        Scene trial = at(pose);
        if (material_contact(trial, figure, goal.ground) != Contact::touching) continue;
        if (!clear_of_others(trial) || !goal_holds(trial, goal, figure)) continue;
        return pose;
      }
    }
    return std::nullopt;
  }

  std::optional<Pose> on_face() const {
    const auto& patch = std::get<SurfaceRegion>(goal.region);
    for (const Quat& q : rotations(Quat::Identity())) {
      Box fb = region_at(s, figure, Pose{Vec3::Zero(), q}).hull;
      double h = support_along(fb, patch.normal);
      for (const Vec2& uv : patch_points(patch)) {
        Pose pose{patch.point_at(uv) + patch.normal * h, q};
        Scene trial = at(pose);
        if (material_contact(trial, figure, goal.ground) != Contact::touching) continue;
        if (!clear_of_others(trial)) continue;
        return pose;
      }
    }
    return std::nullopt;
  }

  std::optional<Pose> in_cavity() const {
    const Voxeme& v = s.voxeme_of(figure);
    const Quat current = s.instance(figure).pose.rotation;
    const Box& cavity = std::get<RegionApprox>(goal.region).hull;

    std::vector<std::optional<Pose>> tries;
    if (orientation_satisfied(v, current)) tries.push_back(fit_inside_oriented(s, figure, goal.ground, current));
    tries.push_back(fit_inside(s, figure, goal.ground));
    for (const Quat& q : rotations(Quat(cavity.axes))) tries.push_back(fit_inside_oriented(s, figure, goal.ground, q));

    for (const auto& pose : tries) {
      if (!pose || !orientation_satisfied(v, pose->rotation)) continue;
      Scene trial = at(*pose);
      if (interpenetrates(trial, figure, goal.ground) || !clear_of_others(trial)) continue;
      if (!goal_holds(trial, goal, figure)) continue;
      return pose;
    }
    return std::nullopt;
  }

  std::optional<Pose> in_interior() const {
    SurfaceRegion face = dominant_face(s, goal.ground, s.instance(figure).pose.position);
    for (const Quat& q : rotations(Quat::Identity())) {
      for (const Vec2& uv : patch_points(face)) {
        Pose pose{face.point_at(uv), q};
        Scene trial = at(pose);
        if (!clear_of_others(trial) || !goal_holds(trial, goal, figure)) continue;
        return pose;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

Pose plan_placement(const Scene& s, std::string_view figure, const PlacementGoal& goal) {
  if (figure == goal.ground) throw Error(ErrorKind::invalid_argument, "figure and ground coincide");
  Placer placer(s, figure, goal);
  std::optional<Pose> pose;
  switch (goal.target) {
    case PlacementGoal::Target::top: pose = placer.on_top(); break;
    case PlacementGoal::Target::vertical_face: pose = placer.on_face(); break;
    case PlacementGoal::Target::cavity: pose = placer.in_cavity(); break;
    case PlacementGoal::Target::interior: pose = placer.in_interior(); break;
  }
  if (!pose)
    throw Error(ErrorKind::unsatisfiable_goal, "cannot place '" + std::string(figure) + "' " +
                                                   std::string(to_string(goal.prep)) + " '" + goal.ground + "'");
  return *pose;
}

// ---------------------------------------------------------------------------
// Goal tests

Vec3 reference_point(const Scene& s, const PlacementGoal& goal, std::string_view figure) {
  RegionApprox r = world_region(s, figure);
  switch (goal.target) {
    case PlacementGoal::Target::top: {
      Aabb b = r.hull.bounds();
      return Vec3(r.hull.center.x(), b.lo.y(), r.hull.center.z());
    }
    case PlacementGoal::Target::vertical_face: {
      const auto& patch = std::get<SurfaceRegion>(goal.region);
      return r.hull.center - patch.normal * support_along(r.hull, patch.normal);
    }
    case PlacementGoal::Target::cavity:
    case PlacementGoal::Target::interior:
      break;
  }
  return r.hull.center;
}

bool goal_holds(const Scene& s, const PlacementGoal& goal, std::string_view figure) {
  const double eps = s.tolerances().contact;
  switch (goal.target) {
    case PlacementGoal::Target::top: {
      if (material_contact(s, figure, goal.ground) != Contact::touching) return false;
      const auto& patch = std::get<SurfaceRegion>(goal.region);
      Vec3 d = reference_point(s, goal, figure) - patch.center;
      return d.dot(patch.normal) >= -eps && std::abs(d.dot(patch.u_axis)) <= 0.5 * patch.extents.x() + eps &&
             std::abs(d.dot(patch.v_axis)) <= 0.5 * patch.extents.y() + eps;
    }
    case PlacementGoal::Target::vertical_face:
      return material_contact(s, figure, goal.ground) == Contact::touching;
    case PlacementGoal::Target::cavity:
      if (interpenetrates(s, figure, goal.ground)) return false;
      return goal.relations.contains(relation(s, figure, goal.ground));
    case PlacementGoal::Target::interior:
      return goal.relations.contains(relation(s, figure, goal.ground));
  }
  return false;
}

double satisfaction_distance(const Scene& final_scene, const PlacementGoal& goal, std::string_view figure) {
  if (goal_holds(final_scene, goal, figure)) return 0.0;
  Vec3 ref = reference_point(final_scene, goal, figure);
  double d = std::holds_alternative<SurfaceRegion>(goal.region)
                 ? std::get<SurfaceRegion>(goal.region).distance_to(ref)
                 : std::get<RegionApprox>(goal.region).hull.distance_to(ref);
  return std::max(d, final_scene.tolerances().contact);
}

}  // namespace voxsim
