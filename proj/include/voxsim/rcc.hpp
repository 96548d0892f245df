#pragma once

#include "voxsim/geometry.hpp"
#include "voxsim/scene.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voxsim {

enum class RCC8Relation : std::uint8_t { DC, EC, PO, TPP, NTPP, TPPi, NTPPi, EQ };

inline constexpr std::array<RCC8Relation, 8> kAllRelations = {
    RCC8Relation::DC,   RCC8Relation::EC,   RCC8Relation::PO,    RCC8Relation::TPP,
    RCC8Relation::NTPP, RCC8Relation::TPPi, RCC8Relation::NTPPi, RCC8Relation::EQ};

std::string_view to_string(RCC8Relation r);
std::optional<RCC8Relation> parse_relation(std::string_view name);

/// Subset of the eight relations, stored as a bit mask.
class RelationSet {
 public:
  constexpr RelationSet() = default;
  constexpr RelationSet(std::initializer_list<RCC8Relation> rs) {
    for (RCC8Relation r : rs) insert(r);
  }
  static constexpr RelationSet all() { return from_bits(0xFF); }
  static constexpr RelationSet from_bits(std::uint8_t bits) {
    RelationSet s;
    s.bits_ = bits;
    return s;
  }

  constexpr void insert(RCC8Relation r) { bits_ |= bit(r); }
  constexpr bool contains(RCC8Relation r) const { return (bits_ & bit(r)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const;
  constexpr std::uint8_t bits() const { return bits_; }
  std::vector<RCC8Relation> members() const;

  constexpr RelationSet operator|(RelationSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr bool operator==(const RelationSet&) const = default;

 private:
  static constexpr std::uint8_t bit(RCC8Relation r) { return static_cast<std::uint8_t>(1u << static_cast<int>(r)); }
  std::uint8_t bits_ = 0;
};

/// "{PO, TPP}" style listing in table order.
std::string to_string(RelationSet s);

RCC8Relation converse(RCC8Relation r);
RelationSet converse(RelationSet s);
/// Entry of the RCC8 composition table: possible R(a,c) given r1(a,b), r2(b,c).
RelationSet compose(RCC8Relation r1, RCC8Relation r2);

/// Exact classification of two oriented boxes; contact within eps counts as touching.
RCC8Relation classify_boxes(const Box& a, const Box& b, double eps);
/// Classification of two occupancy grids on the same lattice.
RCC8Relation classify_voxels(const VoxelGrid& a, const VoxelGrid& b);

/// Regions are compared by their hulls (object plus cavity). Either side in
/// voxel representation sends both through the voxel route at the finer of
/// the two resolutions.
RCC8Relation classify(const RegionApprox& a, const RegionApprox& b, double eps = 1e-3);
bool holds(RCC8Relation r, const RegionApprox& a, const RegionApprox& b, double eps = 1e-3);

/// Relation between two scene instances at their current poses.
RCC8Relation relation(const Scene& s, std::string_view a, std::string_view b);

}  // namespace voxsim
