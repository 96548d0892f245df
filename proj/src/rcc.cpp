#include "voxsim/rcc.hpp"

#include "voxsim/error.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace voxsim {

namespace {

constexpr std::array<std::string_view, 8> kNames = {"DC", "EC", "PO", "TPP", "NTPP", "TPPi", "NTPPi", "EQ"};

using R = RCC8Relation;
constexpr RelationSet kAll = RelationSet::all();
constexpr RelationSet kDR = {R::DC, R::EC, R::PO, R::TPP, R::NTPP};  // a part of or apart from c
constexpr RelationSet kDRi = {R::DC, R::EC, R::PO, R::TPPi, R::NTPPi};
constexpr RelationSet kPP = {R::PO, R::TPP, R::NTPP};
constexpr RelationSet kPPi = {R::PO, R::TPPi, R::NTPPi};

// Rows r1, columns r2, both in DC EC PO TPP NTPP TPPi NTPPi EQ order.
using S = RelationSet;
using Row = std::array<RelationSet, 8>;
constexpr std::array<Row, 8> kTable = {{
    // DC
    Row{kAll, kDR, kDR, kDR, kDR, S{R::DC}, S{R::DC}, S{R::DC}},
    // EC
    Row{kDRi, S{R::DC, R::EC, R::PO, R::TPP, R::TPPi, R::EQ}, kDR, S{R::EC, R::PO, R::TPP, R::NTPP}, kPP, S{R::DC, R::EC},
     S{R::DC}, S{R::EC}},
    // PO
    Row{kDRi, kDRi, kAll, kPP, kPP, kDRi, kDRi, S{R::PO}},
    // TPP
    Row{S{R::DC}, S{R::DC, R::EC}, kDR, S{R::TPP, R::NTPP}, S{R::NTPP}, S{R::DC, R::EC, R::PO, R::TPP, R::TPPi, R::EQ}, kDRi,
     S{R::TPP}},
    // NTPP
    Row{S{R::DC}, S{R::DC}, kDR, S{R::NTPP}, S{R::NTPP}, kDR, kAll, S{R::NTPP}},
    // TPPi
    Row{kDRi, S{R::EC, R::PO, R::TPPi, R::NTPPi}, kPPi, S{R::PO, R::TPP, R::TPPi, R::EQ}, kPP, S{R::TPPi, R::NTPPi},
     S{R::NTPPi}, S{R::TPPi}},
    // NTPPi
    Row{kDRi, kPPi, kPPi, kPPi, S{R::PO, R::TPP, R::NTPP, R::TPPi, R::NTPPi, R::EQ}, S{R::NTPPi}, S{R::NTPPi}, S{R::NTPPi}},
    // EQ
    Row{S{R::DC}, S{R::EC}, S{R::PO}, S{R::TPP}, S{R::NTPP}, S{R::TPPi}, S{R::NTPPi}, S{R::EQ}},
}};

// Depth of p below the nearest face of b (p assumed inside b).
double depth_inside(const Box& b, const Vec3& p) {
  Vec3 local = b.to_local(p).cwiseAbs();
  return (b.half - local).minCoeff();
}

bool inside(const Box& inner, const Box& outer, double eps) {
  for (const Vec3& c : inner.corners())
    if (!outer.contains(c, eps)) return false;
  return true;
}

bool touches_boundary(const Box& inner, const Box& outer, double eps) {
  for (const Vec3& c : inner.corners())
    if (depth_inside(outer, c) <= eps) return true;
  return false;
}

bool empty_box(const Box& b) { return !(b.half.array() > 0.0).all(); }

// Occupied cell of `grid` with a face neighbour outside `grid`.
bool on_boundary(const VoxelGrid& grid, const Index3& cell) {
  static const std::array<Index3, 6> kSteps = {Index3(1, 0, 0),  Index3(-1, 0, 0), Index3(0, 1, 0),
                                               Index3(0, -1, 0), Index3(0, 0, 1),  Index3(0, 0, -1)};
  for (const Index3& d : kSteps)
    if (!grid.occupied(cell + d)) return true;
  return false;
}

}  // namespace

std::string_view to_string(RCC8Relation r) { return kNames[static_cast<int>(r)]; }

std::optional<RCC8Relation> parse_relation(std::string_view name) {
  for (int i = 0; i < 8; ++i)
    if (kNames[i] == name) return static_cast<RCC8Relation>(i);
  return std::nullopt;
}

int RelationSet::size() const { return std::popcount(bits_); }

std::vector<RCC8Relation> RelationSet::members() const {
  std::vector<RCC8Relation> out;
  for (RCC8Relation r : kAllRelations)
    if (contains(r)) out.push_back(r);
  return out;
}

std::string to_string(RelationSet s) {
  std::string out = "{";
  for (RCC8Relation r : s.members()) {
    if (out.size() > 1) out += ", ";
    out += to_string(r);
  }
  return out + "}";
}

RCC8Relation converse(RCC8Relation r) {
  switch (r) {
    case R::TPP: return R::TPPi;
    case R::NTPP: return R::NTPPi;
    case R::TPPi: return R::TPP;
    case R::NTPPi: return R::NTPP;
    default: return r;
  }
}

RelationSet converse(RelationSet s) {
  RelationSet out;
  for (RCC8Relation r : s.members()) out.insert(converse(r));
  return out;
}

RelationSet compose(RCC8Relation r1, RCC8Relation r2) {
  return kTable[static_cast<int>(r1)][static_cast<int>(r2)];
}

RCC8Relation classify_boxes(const Box& a, const Box& b, double eps) {
  if (empty_box(a) || empty_box(b)) throw Error(ErrorKind::invalid_argument, "cannot classify an empty region");
  double gap = separation(a, b);
  if (gap > eps) return R::DC;
  bool a_in_b = inside(a, b, eps);
  bool b_in_a = inside(b, a, eps);
  if (a_in_b && b_in_a) return R::EQ;
  if (a_in_b) return touches_boundary(a, b, eps) ? R::TPP : R::NTPP;
  if (b_in_a) return touches_boundary(b, a, eps) ? R::TPPi : R::NTPPi;
  return gap < -eps ? R::PO : R::EC;
}

RCC8Relation classify_voxels(const VoxelGrid& a, const VoxelGrid& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::invalid_argument, "cannot classify an empty region");
  std::size_t shared = 0;
  a.for_each([&](const Index3& c) { shared += b.occupied(c) ? 1 : 0; });
  const std::size_t na = a.count(), nb = b.count();
  if (shared == na && shared == nb) return R::EQ;
  if (shared == na) {
    bool touch = false;
    a.for_each([&](const Index3& c) { touch = touch || on_boundary(b, c); });
    return touch ? R::TPP : R::NTPP;
  }
  if (shared == nb) {
    bool touch = false;
    b.for_each([&](const Index3& c) { touch = touch || on_boundary(a, c); });
    return touch ? R::TPPi : R::NTPPi;
  }
  if (shared > 0) return R::PO;
  bool adjacent = false;
  a.for_each([&](const Index3& c) {
    for (int dz = -1; dz <= 1 && !adjacent; ++dz)
      for (int dy = -1; dy <= 1 && !adjacent; ++dy)
        for (int dx = -1; dx <= 1 && !adjacent; ++dx)
          if (b.occupied(c + Index3(dx, dy, dz))) adjacent = true;
  });
  return adjacent ? R::EC : R::DC;
}

RCC8Relation classify(const RegionApprox& a, const RegionApprox& b, double eps) {
  if (a.representation == Representation::voxel_grid || b.representation == Representation::voxel_grid) {
    double res = std::min(a.representation == Representation::voxel_grid ? a.resolution : b.resolution,
                          b.representation == Representation::voxel_grid ? b.resolution : a.resolution);
    if (!(res > 0.0)) throw Error(ErrorKind::invalid_argument, "voxel resolution must be positive");
    return classify_voxels(voxelize(a.hull, std::nullopt, res), voxelize(b.hull, std::nullopt, res));
  }
  return classify_boxes(a.hull, b.hull, eps);
}

bool holds(RCC8Relation r, const RegionApprox& a, const RegionApprox& b, double eps) {
  return classify(a, b, eps) == r;
}

RCC8Relation relation(const Scene& s, std::string_view a, std::string_view b) {
  return classify(world_region(s, a), world_region(s, b), s.tolerances().contact);
}

}  // namespace voxsim
