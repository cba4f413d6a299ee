#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "egoscene/annotations.hpp"
#include "egoscene/depth.hpp"
#include "egoscene/geometry.hpp"

namespace egoscene {

/// Image-plane box (inclusive pixel bounds, y grows downward) extended with
/// the estimated depth interval of the region.
struct Box3D {
  SegmentId id = 0;
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  double z_min = 0.0;
  double z_max = 0.0;
  double z_mean = 0.0;
  double centroid_y = 0.0;
};

enum class RelationKind : std::uint8_t {
  kInFrontOf = 1,
  kBehind,
  kOn,
  kAbove,
  kUnder,
  kNextTo,
};

std::string_view to_string(RelationKind k) noexcept;
std::optional<RelationKind> relation_kind_from_string(std::string_view s) noexcept;

/// Inverse used when reading a relation from the other side. On and Above both
/// invert to Under; Under maps back to Above.
RelationKind inverse(RelationKind k) noexcept;

/// True when `ab` read from a and `ba` read from b describe the same relation.
bool are_inverse(RelationKind ab, RelationKind ba) noexcept;

struct Relation {
  RelationKind kind = RelationKind::kNextTo;
  SegmentId subject = 0;
  SegmentId object = 0;

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct RelationThresholds {
  double touch_tol = 5.0;     // px
  double near_z = 150.0;      // mm
  double overlap_min = 0.3;   // fraction of the smaller extent

  void validate() const;
};

/// Box for a segment: its bbox, the depth interval [z_min_est, z_max] over
/// that bbox, and the polygon centroid row.
Box3D build_box3d(const Segment& seg, const DepthMap& map);
Box3D build_box3d(const Segment& seg, const DepthMap& map, double centroid_y);

/// Relation with `a` as subject, rules tried in order:
///   0. one box contains the other in x, y and z: none
///   1. xy overlap, disjoint z: the nearer box is in front of the other
///   2. z near, x overlap, a's bottom within touch_tol of b's top: a on b
///   3. z near, x overlap, a wholly higher (or lower): a above (under) b
///   4. z near, y overlap, horizontal gap within touch_tol: next to
std::optional<RelationKind> relate(const Box3D& a, const Box3D& b,
                                   const RelationThresholds& t);

/// Both readings of the pair at once: (a -> b, b -> a).
std::optional<std::pair<RelationKind, RelationKind>> relate_pair(
    const Box3D& a, const Box3D& b, const RelationThresholds& t);

/// Relation matrix for the regions of one direction field. Cells hold 0 for
/// no relation or a RelationKind code; region_ids maps row index to segment.
class FieldAdjacency {
 public:
  FieldAdjacency() = default;
  FieldAdjacency(DirectionField field, std::vector<SegmentId> region_ids);

  DirectionField field() const noexcept { return field_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<SegmentId>& region_ids() const noexcept { return ids_; }

  std::optional<RelationKind> cell(std::size_t i, std::size_t j) const noexcept;
  void set(std::size_t i, std::size_t j, RelationKind ab, RelationKind ba);
  void clear(std::size_t i, std::size_t j) noexcept;

  /// Stored relation for the pair as read from the lower row index.
  std::optional<Relation> relation(std::size_t i, std::size_t j) const;

  /// Every related pair once, row-major over the upper triangle.
  std::vector<Relation> relations() const;

  /// Copy with every relation touching `ids` removed.
  FieldAdjacency without(std::span<const SegmentId> ids) const;

  std::optional<std::size_t> index_of(SegmentId id) const noexcept;

 private:
  DirectionField field_ = DirectionField::kFront;
  std::vector<SegmentId> ids_;
  std::vector<std::uint8_t> cells_;
};

/// Boxes of one field, each tagged with its field.
struct FieldBox {
  Box3D box;
  DirectionField field;
};

/// Left, front and right matrices (in that order). Regions are indexed in
/// ascending segment id; pairs across fields are never evaluated.
std::array<FieldAdjacency, 3> build_adjacency(std::span<const FieldBox> boxes,
                                              const RelationThresholds& t);

struct GroundBackground {
  SegmentId ground = 0;      // largest centroid row
  SegmentId background = 0;  // largest mean depth
};

GroundBackground detect_ground_background(std::span<const Box3D> boxes);

}  // namespace egoscene
