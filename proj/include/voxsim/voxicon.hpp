#pragma once

#include "voxsim/geometry.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voxsim {

enum class VoxemeKind { object, program, attribute, relation };
enum class Primitive { box, cylinder, sheet };
enum class IntrinsicFace { top, bottom, front, side };
enum class Plane { XY, YZ, XZ };

struct GeometryHead {
  Primitive primitive = Primitive::box;
  std::map<IntrinsicFace, SignedAxis> intrinsic_axes;

  bool operator==(const GeometryHead&) const = default;
};

/// Continuous rotational symmetry axes (0 = X, 1 = Y, 2 = Z) and mirror planes.
struct SymmetrySpec {
  std::vector<Plane> reflectional;
  std::vector<int> rotational;

  bool rotates_about(int axis) const;
  bool operator==(const SymmetrySpec&) const = default;
};

struct ConcavitySpec {
  SignedAxis opens_along;
  Aabb cavity;  // object frame, meters at unit scale

  bool operator==(const ConcavitySpec&) const = default;
};

enum class Alignment { any, aligned, horizontal, vertical };

/// An object-frame axis, named either directly ("+X") or through an
/// intrinsic face ("top") resolved against the voxeme's head.
struct AxisRef {
  std::optional<SignedAxis> axis;
  std::optional<IntrinsicFace> face;

  bool operator==(const AxisRef&) const = default;
};

struct OrientationConstraint {
  AxisRef axis;
  Alignment alignment = Alignment::any;
  SignedAxis target{1, 1};  // world direction, used by `aligned`
  double tolerance_deg = 0.0;

  bool operator==(const OrientationConstraint&) const = default;
};

enum class SupportConstraint { none, rest };

struct Habitat {
  std::string id;
  OrientationConstraint orientation;
  SupportConstraint support = SupportConstraint::none;

  bool operator==(const Habitat&) const = default;
};

enum class AffordanceFlavor { gibsonian, telic };

struct Affordance {
  std::string id;
  AffordanceFlavor flavor = AffordanceFlavor::gibsonian;
  std::string behavior;

  bool operator==(const Affordance&) const = default;
};

/// Parsed subevent expression: a call `head(args...)`, a bare symbol, or the
/// guard form `lhs -> rhs` (head "->", two args).
struct Expr {
  std::string head;
  std::vector<Expr> args;
  bool call = false;

  bool is_guard() const { return head == "->"; }
  bool operator==(const Expr&) const = default;
};

Expr parse_expr(std::string_view text);
/// Canonical rendering, e.g. "at(A2, A3) -> ungrasp(A1, A2)".
std::string to_string(const Expr& e);

enum class ProgramKind { state, process, transition, assignment, test };
enum class SlotType { agent, object, objects, location };

struct ArgumentSlot {
  std::string name;
  SlotType type = SlotType::object;
  std::vector<std::string> relations;  // location slots: admissible relation lemmas
  bool optional = false;

  bool operator==(const ArgumentSlot&) const = default;
};

struct Subevent {
  std::string label;  // E1, E2, ...
  Expr expr;

  bool operator==(const Subevent&) const = default;
};

enum class DomainKind { angle, length, surface_point };

struct ParameterDecl {
  std::string name;
  DomainKind domain = DomainKind::angle;
  double min = 0.0;
  double max = 360.0;
  std::string subevent;
  std::string unless_bound;  // slot name; parameter only exists while that slot is unbound

  bool operator==(const ParameterDecl&) const = default;
};

struct ProgramBody {
  ProgramKind kind = ProgramKind::transition;
  std::string past;  // past-tense surface form
  std::vector<ArgumentSlot> args;
  std::vector<Subevent> subevents;
  std::vector<ParameterDecl> params;

  const ArgumentSlot* slot(std::string_view name) const;
  bool operator==(const ProgramBody&) const = default;
};

/// Sortal scale an attribute imposes: ascending picks the smallest.
struct AttributeScale {
  std::string dimension = "volume";
  bool ascending = true;

  bool operator==(const AttributeScale&) const = default;
};

struct Voxeme {
  std::string lemma;
  VoxemeKind kind = VoxemeKind::object;
  std::optional<GeometryHead> head;
  SymmetrySpec symmetry;
  std::optional<ConcavitySpec> concavity;
  std::vector<Habitat> habitats;
  std::vector<Affordance> affordances;
  Vec3 default_dimensions = Vec3::Ones();
  std::optional<ProgramBody> program;
  std::optional<AttributeScale> scale;

  /// Object-frame axis for an intrinsic face, if the head declares it.
  std::optional<SignedAxis> intrinsic(IntrinsicFace face) const;
  std::optional<SignedAxis> resolve(const AxisRef& ref) const;

  bool operator==(const Voxeme&) const = default;
};

struct Diagnostic {
  std::string code;
  std::string message;
};

/// One diagnostic per violated invariant; empty when the voxeme is valid.
std::vector<Diagnostic> validate_voxeme(const Voxeme& v);

bool affords(const Voxeme& v, std::string_view behavior);

/// Lemma -> voxeme table. Immutable once loaded.
class Voxicon {
 public:
  void add(Voxeme v);
  const Voxeme* find(std::string_view lemma) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, Voxeme, std::less<>>& entries() const { return entries_; }

  bool operator==(const Voxicon&) const = default;

 private:
  std::map<std::string, Voxeme, std::less<>> entries_;
};

std::optional<Voxeme> lookup(const Voxicon& voxicon, std::string_view lemma);

Voxicon load_voxicon(std::string_view text);
Voxicon load_voxicon_file(const std::filesystem::path& path);
std::string serialize(const Voxicon& voxicon);

/// The bundled stock voxicon text.
std::string_view stock_voxicon_text();

std::string_view to_string(VoxemeKind k);
std::string_view to_string(ProgramKind k);

}  // namespace voxsim
