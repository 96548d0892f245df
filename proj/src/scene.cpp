#include "voxsim/scene.hpp"

#include "text_format.hpp"
#include "voxsim/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace voxsim {

// ---------------------------------------------------------------------------
// Regions and surfaces

std::vector<Box> RegionApprox::material() const {
  if (!cavity) return {hull};
  return subtract_inner(hull, *cavity);
}

VoxelGrid RegionApprox::voxels(bool carve_cavity) const {
  return voxelize(hull, carve_cavity ? cavity : std::nullopt, resolution);
}

RegionApprox RegionApprox::as_voxels(double res) const {
  RegionApprox r = *this;
  r.representation = Representation::voxel_grid;
  r.resolution = res;
  return r;
}

double SurfaceRegion::distance_to(const Vec3& p) const {
  Vec3 d = p - center;
  double dn = d.dot(normal);
  double du = std::max(0.0, std::abs(d.dot(u_axis)) - 0.5 * extents.x());
  double dv = std::max(0.0, std::abs(d.dot(v_axis)) - 0.5 * extents.y());
  return std::sqrt(dn * dn + du * du + dv * dv);
}

// ---------------------------------------------------------------------------
// Scene

Scene::Scene() : Scene(std::make_shared<const Voxicon>()) {}

Scene::Scene(std::shared_ptr<const Voxicon> voxicon, Tolerances tol) : voxicon_(std::move(voxicon)), tol_(tol) {
  if (!voxicon_) voxicon_ = std::make_shared<const Voxicon>();
  agents_.emplace("agent", Agent{"agent", Pose{Vec3(0.0, 2.0, 0.0), Quat::Identity()}});
}

const SceneInstance& Scene::instance(std::string_view id) const {
  auto it = instances_.find(id);
  if (it == instances_.end()) throw Error(ErrorKind::unknown_id, "unknown instance '" + std::string(id) + "'");
  return it->second;
}

const Agent& Scene::agent(std::string_view id) const {
  auto it = agents_.find(id);
  if (it == agents_.end()) throw Error(ErrorKind::unknown_id, "unknown agent '" + std::string(id) + "'");
  return it->second;
}

const Voxeme& Scene::voxeme_of(std::string_view id) const {
  const SceneInstance& inst = instance(id);
  const Voxeme* v = voxicon_->find(inst.voxeme);
  if (!v) throw Error(ErrorKind::dangling_reference, "instance '" + inst.id + "' uses unknown voxeme '" + inst.voxeme + "'");
  return *v;
}

Vec3 Scene::dimensions(std::string_view id) const {
  return voxeme_of(id).default_dimensions.cwiseProduct(instance(id).scale);
}

Pose Scene::pose_of(std::string_view id) const {
  if (auto it = agents_.find(id); it != agents_.end()) return it->second.pose;
  return instance(id).pose;
}

std::vector<std::string> Scene::descendants(std::string_view id) const {
  std::vector<std::string> out;
  std::vector<std::string> frontier{std::string(id)};
  while (!frontier.empty()) {
    std::string parent = frontier.back();
    frontier.pop_back();
    for (const auto& [cid, inst] : instances_) {
      if (inst.attached_to && *inst.attached_to == parent) {
        out.push_back(cid);
        frontier.push_back(cid);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Scene Scene::with_tolerances(Tolerances tol) const {
  Scene s = *this;
  s.tol_ = tol;
  return s;
}

Scene Scene::with_ground(double height) const {
  Scene s = *this;
  s.ground_ = height;
  return s;
}

Scene Scene::with_instance(SceneInstance inst) const {
  if (inst.id.empty()) throw Error(ErrorKind::invalid_argument, "instance id is empty");
  if (agents_.count(inst.id)) throw Error(ErrorKind::invalid_argument, "id '" + inst.id + "' is taken by an agent");
  if (!voxicon_->find(inst.voxeme))
    throw Error(ErrorKind::dangling_reference, "instance '" + inst.id + "' uses unknown voxeme '" + inst.voxeme + "'");
  if (!(inst.scale.array() > 0.0).all())
    throw Error(ErrorKind::invalid_argument, "instance '" + inst.id + "' needs a positive scale");
  inst.pose.rotation.normalize();
  Scene s = *this;
  std::string key = inst.id;
  s.instances_.insert_or_assign(std::move(key), std::move(inst));
  return s;
}

Scene Scene::with_agent(Agent agent) const {
  if (instances_.count(agent.id))
    throw Error(ErrorKind::invalid_argument, "id '" + agent.id + "' is taken by an instance");
  Scene s = *this;
  std::string key = agent.id;
  s.agents_.insert_or_assign(std::move(key), std::move(agent));
  return s;
}

Scene Scene::with_pose(std::string_view id, const Pose& pose) const {
  Scene s = *this;
  Pose p = pose;
  p.rotation.normalize();
  if (auto it = s.agents_.find(id); it != s.agents_.end()) {
    it->second.pose = p;
  } else {
    auto jt = s.instances_.find(id);
    if (jt == s.instances_.end()) throw Error(ErrorKind::unknown_id, "unknown instance '" + std::string(id) + "'");
    jt->second.pose = p;
    if (jt->second.attached_to) jt->second.attach_offset = s.pose_of(*jt->second.attached_to).inverse() * p;
  }
  s.refresh_children(id);
  return s;
}

Scene Scene::attached(std::string_view child, std::string_view parent) const {
  const SceneInstance& c = instance(child);
  if (!is_agent(parent) && !has(parent))
    throw Error(ErrorKind::unknown_id, "unknown attachment parent '" + std::string(parent) + "'");
  if (child == parent) throw Error(ErrorKind::invalid_argument, "cannot attach '" + c.id + "' to itself");
  auto desc = descendants(child);
  if (std::find(desc.begin(), desc.end(), parent) != desc.end())
    throw Error(ErrorKind::invalid_argument, "attaching '" + c.id + "' to '" + std::string(parent) + "' makes a cycle");
  Scene s = *this;
  auto& inst = s.instances_.find(child)->second;
  inst.attached_to = std::string(parent);
  inst.attach_offset = s.pose_of(parent).inverse() * inst.pose;
  return s;
}

Scene Scene::detached(std::string_view child) const {
  instance(child);
  Scene s = *this;
  auto& inst = s.instances_.find(child)->second;
  inst.attached_to.reset();
  inst.attach_offset = Pose{};
  return s;
}

void Scene::refresh_children(std::string_view parent) {
  Pose base = pose_of(parent);
  for (auto& [cid, inst] : instances_) {
    if (inst.attached_to && *inst.attached_to == parent) {
      inst.pose = base * inst.attach_offset;
      refresh_children(cid);
    }
  }
}

// ---------------------------------------------------------------------------
// Geometry queries

Quat region_rotation(const Voxeme& v, const Quat& rotation) {
  const auto& rot = v.symmetry.rotational;
  if (rot.size() >= 2) return Quat::Identity();
  if (rot.size() == 1) {
    Vec3 axis = Vec3::Unit(rot.front());
    return Quat::FromTwoVectors(axis, rotation * axis);
  }
  return rotation.normalized();
}

RegionApprox region_at(const Scene& s, std::string_view id, const Pose& pose) {
  const SceneInstance& inst = s.instance(id);
  const Voxeme& v = s.voxeme_of(id);
  Mat3 R = region_rotation(v, pose.rotation).toRotationMatrix();
  RegionApprox r;
  r.hull.center = pose.position;
  r.hull.axes = R;
  r.hull.half = 0.5 * v.default_dimensions.cwiseProduct(inst.scale);
  if (v.concavity) {
    Box c;
    c.axes = R;
    c.center = pose.position + R * v.concavity->cavity.center().cwiseProduct(inst.scale);
    c.half = 0.5 * v.concavity->cavity.size().cwiseProduct(inst.scale);
    r.cavity = c;
  }
  r.resolution = s.tolerances().voxel_resolution;
  return r;
}

RegionApprox world_region(const Scene& s, std::string_view id) { return region_at(s, id, s.instance(id).pose); }

namespace {

SurfaceRegion face_patch(const Box& box, SignedAxis face) {
  SurfaceRegion p;
  int a = face.axis, b = (a + 1) % 3, c = (a + 2) % 3;
  p.normal = face.sign * box.axes.col(a);
  p.center = box.center + p.normal * box.half[a];
  p.u_axis = box.axes.col(b);
  p.v_axis = box.axes.col(c);
  p.extents = Vec2(2.0 * box.half[b], 2.0 * box.half[c]);
  return p;
}

SurfaceRegion cavity_floor(const Box& cavity, SignedAxis opening) {
  SurfaceRegion p = face_patch(cavity, opening.opposite());
  // Floor faces up into the cavity.
  p.normal = -p.normal;
  return p;
}

constexpr std::array<SignedAxis, 6> kAllFaces = {SignedAxis{0, 1},  SignedAxis{0, -1}, SignedAxis{1, 1},
                                                 SignedAxis{1, -1}, SignedAxis{2, 1},  SignedAxis{2, -1}};

}  // namespace

SurfaceRegion select_surface(const Scene& s, std::string_view id, const SurfaceSelector& selector) {
  const Voxeme& v = s.voxeme_of(id);
  RegionApprox r = world_region(s, id);
  const Mat3& R = r.hull.axes;
  const double tol = deg_to_rad(s.tolerances().orientation_deg);

  switch (selector.kind) {
    case SurfaceSelector::Kind::top: {
      SignedAxis chosen{1, 1};
      auto top = v.intrinsic(IntrinsicFace::top);
      if (top && (R * top->vector()).dot(kWorldUp) >= std::cos(tol)) {
        chosen = *top;
      } else {
        double best = -2.0;
        for (SignedAxis f : kAllFaces) {
          double up = (R * f.vector()).dot(kWorldUp);
          if (up > best + 1e-12) {
            best = up;
            chosen = f;
          }
        }
      }
      if (v.concavity && r.cavity && v.concavity->opens_along == chosen) return cavity_floor(*r.cavity, chosen);
      return face_patch(r.hull, chosen);
    }
    case SurfaceSelector::Kind::vertical_face: {
      std::optional<SurfaceRegion> best;
      double best_dist = std::numeric_limits<double>::infinity();
      // A sheet only offers its two broad faces; its edges are not faces.
      int thin = -1;
      if (v.head && v.head->primitive == Primitive::sheet) s.dimensions(id).minCoeff(&thin);
      for (SignedAxis f : kAllFaces) {
        if (thin >= 0 && f.axis != thin) continue;
        SurfaceRegion p = face_patch(r.hull, f);
        if (std::abs(p.normal.dot(kWorldUp)) > std::sin(tol)) continue;
        double d = p.distance_to(selector.reference);
        bool better = d < best_dist - 1e-12 ||
                      (std::abs(d - best_dist) <= 1e-12 && best && p.extents.prod() > best->extents.prod());
        if (!best || better) {
          best = p;
          best_dist = d;
        }
      }
      if (!best) throw Error(ErrorKind::invalid_argument, "'" + std::string(id) + "' has no near-vertical face");
      return *best;
    }
    case SurfaceSelector::Kind::interior_bottom: {
      if (!v.concavity || !r.cavity)
        throw Error(ErrorKind::invalid_argument, "'" + std::string(id) + "' has no concavity");
      return cavity_floor(*r.cavity, v.concavity->opens_along);
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown surface selector");
}

Scene settle(const Scene& s, std::string_view id) {
  const SceneInstance& inst = s.instance(id);
  if (inst.attached_to)
    throw Error(ErrorKind::invalid_argument, "cannot settle attached instance '" + std::string(id) + "'");
  const double eps = s.tolerances().contact;
  Aabb fb = world_region(s, id).hull.bounds();
  const double bottom = fb.lo.y();
  double support = s.ground_height();

  auto riders = s.descendants(id);
  for (const auto& [oid, other] : s.instances()) {
    if (oid == id || std::find(riders.begin(), riders.end(), oid) != riders.end()) continue;
    for (const Box& part : world_region(s, oid).material()) {
      Aabb pb = part.bounds();
      bool under = pb.lo.x() < fb.hi.x() - eps && pb.hi.x() > fb.lo.x() + eps && pb.lo.z() < fb.hi.z() - eps &&
                   pb.hi.z() > fb.lo.z() + eps;
      if (under && pb.hi.y() <= bottom + eps) support = std::max(support, pb.hi.y());
    }
  }
  double drop = bottom - support;
  if (std::abs(drop) <= 1e-12) return s;
  Pose p = inst.pose;
  p.position.y() -= drop;
  return s.with_pose(id, p);
}

namespace {

bool orientation_holds(const Voxeme& v, const OrientationConstraint& o, const Quat& rotation) {
  if (o.alignment == Alignment::any) return true;
  auto axis = v.resolve(o.axis);
  if (!axis) return false;
  Vec3 d = rotation * axis->vector();
  double tol = deg_to_rad(o.tolerance_deg);
  switch (o.alignment) {
    case Alignment::aligned:
      return std::acos(std::clamp(d.dot(o.target.vector()), -1.0, 1.0)) <= tol + 1e-12;
    case Alignment::horizontal:
      return std::abs(d.dot(kWorldUp)) <= std::sin(tol) + 1e-12;
    case Alignment::vertical:
      return std::abs(d.dot(kWorldUp)) >= std::cos(tol) - 1e-12;
    case Alignment::any:
      break;
  }
  return true;
}

}  // namespace

bool orientation_satisfied(const Voxeme& v, const Quat& rotation) {
  for (const Habitat& h : v.habitats)
    if (!orientation_holds(v, h.orientation, rotation)) return false;
  return true;
}

std::vector<std::string> check_habitat(const Scene& s, std::string_view id) {
  const SceneInstance& inst = s.instance(id);
  const Voxeme& v = s.voxeme_of(id);
  std::vector<std::string> violated;

  for (const Habitat& h : v.habitats) {
    bool ok = orientation_holds(v, h.orientation, inst.pose.rotation);
    if (ok && h.support == SupportConstraint::rest && !inst.attached_to) {
      const double eps = s.tolerances().contact;
      Aabb fb = world_region(s, id).hull.bounds();
      bool supported = std::abs(fb.lo.y() - s.ground_height()) <= eps;
      for (const auto& [oid, other] : s.instances()) {
        if (supported) break;
        if (oid == id) continue;
        Aabb ob = world_region(s, oid).hull.bounds();
        if (ob.lo.y() >= fb.lo.y() + eps) continue;  // not underneath
        supported = material_contact(s, id, oid) != Contact::separate;
      }
      ok = supported;
    }
    if (!ok) violated.push_back(h.id);
  }
  return violated;
}

Contact material_contact(const Scene& s, std::string_view a, std::string_view b) {
  return contact(world_region(s, a).material(), world_region(s, b).material(), s.tolerances().contact);
}

bool interpenetrates(const Scene& s, std::string_view a, std::string_view b) {
  return material_contact(s, a, b) == Contact::overlapping;
}

std::vector<Quat> axis_aligned_rotations(const Quat& frame) {
  std::vector<Quat> out;
  std::array<int, 3> perm = {0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3 P = Mat3::Zero();
      for (int c = 0; c < 3; ++c) P(perm[c], c) = (signs >> c) & 1 ? -1.0 : 1.0;
      if (P.determinant() < 0.0) continue;
      out.push_back((frame * Quat(P)).normalized());
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::optional<Pose> fit_inside_oriented(const Scene& s, std::string_view figure, std::string_view container,
                                        const Quat& rotation) {
  const Voxeme& cv = s.voxeme_of(container);
  if (!cv.concavity || !affords(cv, "contain"))
    throw Error(ErrorKind::invalid_argument, "'" + std::string(container) + "' cannot contain objects");
  s.instance(figure);
  const double eps = s.tolerances().contact;
  Box cavity = *world_region(s, container).cavity;
  const SignedAxis open = cv.concavity->opens_along;
  Vec3 w = open.sign * cavity.axes.col(open.axis);

  Box fb = region_at(s, figure, Pose{Vec3::Zero(), rotation}).hull;
  Vec3 ext = (cavity.axes.transpose() * fb.axes).cwiseAbs() * fb.half;
  for (int j = 0; j < 3; ++j)
    if (j != open.axis && ext[j] > cavity.half[j] + eps) return std::nullopt;

  Vec3 floor = cavity.center - w * cavity.half[open.axis];
  return Pose{floor + w * ext[open.axis], rotation.normalized()};
}

std::optional<Pose> fit_inside(const Scene& s, std::string_view figure, std::string_view container) {
  const Voxeme& cv = s.voxeme_of(container);
  if (!cv.concavity || !affords(cv, "contain"))
    throw Error(ErrorKind::invalid_argument, "'" + std::string(container) + "' cannot contain objects");
  const Quat current = s.instance(figure).pose.rotation;
  const Vec3 dims = s.dimensions(figure);
  const double longest = dims.maxCoeff();
  Box cavity = *world_region(s, container).cavity;
  Vec3 w = cv.concavity->opens_along.sign * cavity.axes.col(cv.concavity->opens_along.axis);

  std::optional<Pose> best;
  double best_angle = std::numeric_limits<double>::infinity();
  for (const Quat& q : axis_aligned_rotations(Quat(cavity.axes))) {
    bool longest_on_axis = false;
    for (int i = 0; i < 3; ++i)
      if (dims[i] >= longest - 1e-12 && std::abs((q * Vec3::Unit(i)).dot(w)) > 1.0 - 1e-9) longest_on_axis = true;
    if (!longest_on_axis) continue;
    auto pose = fit_inside_oriented(s, figure, container, q);
    if (!pose) continue;
    double angle = rotation_angle(current, q);
    if (angle < best_angle - 1e-9) {
      best_angle = angle;
      best = pose;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// scene/1

namespace {

using detail::Line;

Vec3 read_vec(const Line& l, std::size_t first) {
  return Vec3(detail::to_number(l, first), detail::to_number(l, first + 1), detail::to_number(l, first + 2));
}

}  // namespace

Scene load_scene(std::string_view text, std::shared_ptr<const Voxicon> voxicon, Tolerances tol) {
  auto lines = detail::tokenize(text);
  if (lines.empty() || lines[0].tokens.size() != 1 || lines[0].tokens[0].text != "scene/1") {
    if (lines.empty()) throw Error(ErrorKind::syntax, "line 1: expected header 'scene/1'", 1);
    lines[0].fail("expected header 'scene/1'");
  }
  Scene scene(std::move(voxicon), tol);
  std::vector<std::pair<int, std::pair<std::string, std::string>>> attachments;
  std::vector<std::pair<int, Agent>> agents;
  std::set<std::string> seen;

  auto fail_doc = [](const Line& l, const Error& e) -> Error {
    ErrorKind kind = exit_code(e.kind()) == 3 ? e.kind() : ErrorKind::invalid_document;
    return Error(kind, "line " + std::to_string(l.number) + ": " + e.what(), l.number);
  };

  std::size_t i = 1;
  while (i < lines.size()) {
    const Line& l = lines[i++];
    const std::string& key = l.tokens[0].text;
    if (key == "ground") {
      l.expect_count(2, 2);
      scene = scene.with_ground(detail::to_number(l, 1));
    } else if (key == "agent") {
      l.expect_count(5, 5);
      std::string id = l.at(1).text;
      if (!seen.insert(id).second) l.fail("duplicate id '" + id + "'", 1);
      agents.push_back({l.number, Agent{id, Pose{read_vec(l, 2), Quat::Identity()}}});
    } else if (key == "instance") {
      l.expect_count(4, 4);
      if (l.at(3).text != "{") l.fail("expected '{'", 3);
      SceneInstance inst;
      inst.id = l.at(1).text;
      inst.voxeme = l.at(2).text;
      if (!seen.insert(inst.id).second) l.fail("duplicate id '" + inst.id + "'", 1);
      while (true) {
        if (i >= lines.size()) throw Error(ErrorKind::syntax, "unexpected end of scene document");
        const Line& b = lines[i++];
        const std::string& k = b.tokens[0].text;
        if (k == "}") break;
        if (k == "position") {
          b.expect_count(4, 4);
          inst.pose.position = read_vec(b, 1);
        } else if (k == "rotation") {
          b.expect_count(2, 6);
          if (b.at(1).text == "quat") {
            b.expect_count(6, 6);
            Quat q(detail::to_number(b, 2), detail::to_number(b, 3), detail::to_number(b, 4), detail::to_number(b, 5));
            if (q.norm() < 1e-12) b.fail("zero quaternion", 2);
            inst.pose.rotation = q.normalized();
          } else if (b.at(1).text == "euler") {
            b.expect_count(5, 5);
            inst.pose.rotation = quat_from_euler_deg(read_vec(b, 2));
          } else {
            b.fail("expected 'quat' or 'euler'", 1);
          }
        } else if (k == "scale") {
          b.expect_count(4, 4);
          inst.scale = read_vec(b, 1);
        } else if (k == "attached") {
          b.expect_count(2, 2);
          attachments.push_back({b.number, {inst.id, b.at(1).text}});
        } else {
          b.fail("unknown instance key '" + k + "'");
        }
      }
      try {
        scene = scene.with_instance(inst);
      } catch (const Error& e) {
        throw fail_doc(l, e);
      }
    } else {
      l.fail("unknown key '" + key + "'");
    }
  }
  if (!agents.empty()) {
    // Declared agents replace the default one.
    Scene fresh = Scene(scene.voxicon_ptr(), tol).with_ground(scene.ground_height());
    fresh.agents_.clear();
    for (auto& [line_no, a] : agents) {
      if (scene.has(a.id))
        throw Error(ErrorKind::invalid_document, "line " + std::to_string(line_no) + ": duplicate id '" + a.id + "'",
                    line_no);
      fresh.agents_.insert_or_assign(a.id, a);
    }
    for (const auto& [id, inst] : scene.instances()) fresh.instances_.insert_or_assign(id, inst);
    scene = std::move(fresh);
  }
  for (const auto& [line_no, link] : attachments) {
    try {
      scene = scene.attached(link.first, link.second);
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  return scene;
}

Scene load_scene_file(const std::filesystem::path& path, std::shared_ptr<const Voxicon> voxicon, Tolerances tol) {
  return load_scene(detail::read_file(path.string()), std::move(voxicon), tol);
}

std::string serialize(const Scene& s) {
  using detail::format_number;
  auto vec = [](const Vec3& v) {
    return format_number(v.x()) + " " + format_number(v.y()) + " " + format_number(v.z());
  };
  std::ostringstream out;
  out << "scene/1\n";
  out << "ground " << format_number(s.ground_height()) << "\n";
  for (const auto& [id, a] : s.agents()) out << "agent " << id << " " << vec(a.pose.position) << "\n";
  for (const auto& [id, inst] : s.instances()) {
    const Quat& q = inst.pose.rotation;
    out << "instance " << id << " " << inst.voxeme << " {\n";
    out << "  position " << vec(inst.pose.position) << "\n";
    out << "  rotation quat " << format_number(q.w()) << " " << format_number(q.x()) << " " << format_number(q.y())
        << " " << format_number(q.z()) << "\n";
    out << "  scale " << vec(inst.scale) << "\n";
    if (inst.attached_to) out << "  attached " << *inst.attached_to << "\n";
    out << "}\n";
  }
  return out.str();
}

}  // namespace voxsim
