#include "egoscene/relations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace egoscene {

namespace {

struct AxisOverlap {
  int overlap;  // negative when the intervals are apart (minus the gap)
  int smaller_extent;
};

AxisOverlap axis_overlap(int a1, int a2, int b1, int b2) noexcept {
  return {std::min(a2, b2) - std::max(a1, b1), std::min(a2 - a1, b2 - b1)};
}

bool overlaps(const AxisOverlap& o, double overlap_min) noexcept {
  return o.overlap > 0 && o.overlap >= overlap_min * o.smaller_extent;
}

bool inside(const Box3D& in, const Box3D& out) noexcept {
  return out.x1 <= in.x1 && in.x2 <= out.x2 && out.y1 <= in.y1 && in.y2 <= out.y2 &&
         out.z_min <= in.z_min && in.z_max <= out.z_max;
}

}  // namespace

std::string_view to_string(RelationKind k) noexcept {
  switch (k) {
    case RelationKind::kInFrontOf: return "in_front_of";
    case RelationKind::kBehind: return "behind";
    case RelationKind::kOn: return "on";
    case RelationKind::kAbove: return "above";
    case RelationKind::kUnder: return "under";
    case RelationKind::kNextTo: return "next_to";
  }
  return "next_to";
}

std::optional<RelationKind> relation_kind_from_string(std::string_view s) noexcept {
  for (auto k : {RelationKind::kInFrontOf, RelationKind::kBehind, RelationKind::kOn,
                 RelationKind::kAbove, RelationKind::kUnder, RelationKind::kNextTo})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

RelationKind inverse(RelationKind k) noexcept {
  switch (k) {
    case RelationKind::kInFrontOf: return RelationKind::kBehind;
    case RelationKind::kBehind: return RelationKind::kInFrontOf;
    case RelationKind::kOn: return RelationKind::kUnder;
    case RelationKind::kAbove: return RelationKind::kUnder;
    case RelationKind::kUnder: return RelationKind::kAbove;
    case RelationKind::kNextTo: return RelationKind::kNextTo;
  }
  return k;
}

bool are_inverse(RelationKind ab, RelationKind ba) noexcept {
  return inverse(ab) == ba || inverse(ba) == ab;
}

void RelationThresholds::validate() const {
  if (!(touch_tol >= 0.0) || !(near_z >= 0.0) || !(overlap_min >= 0.0 && overlap_min <= 1.0))
    throw Error(ErrorKind::kConfig,
                "relation thresholds must be non-negative with overlap_min <= 1");
}

Box3D build_box3d(const Segment& seg, const DepthMap& map, double centroid_y) {
  const RegionDepthStats stats = region_depth_stats(map, seg.bbox);
  Box3D box;
  box.id = seg.id;
  box.x1 = seg.bbox.x1;
  box.y1 = seg.bbox.y1;
  box.x2 = seg.bbox.x2;
  box.y2 = seg.bbox.y2;
  box.z_min = stats.z_min_est;
  box.z_max = stats.z_max;
  box.z_mean = stats.z_mean;
  box.centroid_y = centroid_y;
  return box;
}

Box3D build_box3d(const Segment& seg, const DepthMap& map) {
  return build_box3d(seg, map, region_centroid(seg.polygon, map).y_img);
}

std::optional<std::pair<RelationKind, RelationKind>> relate_pair(
    const Box3D& a, const Box3D& b, const RelationThresholds& t) {
  using K = RelationKind;
  using Pair = std::pair<K, K>;
  if (a.id == b.id)
    throw Error(ErrorKind::kInvalidArgument,
                "cannot relate region " + std::to_string(a.id) + " to itself");

  if (inside(a, b) || inside(b, a)) return std::nullopt;

  const AxisOverlap ox = axis_overlap(a.x1, a.x2, b.x1, b.x2);
  const AxisOverlap oy = axis_overlap(a.y1, a.y2, b.y1, b.y2);
  const bool x_ov = overlaps(ox, t.overlap_min);
  const bool y_ov = overlaps(oy, t.overlap_min);

  const bool a_nearer = a.z_max < b.z_min;
  const bool b_nearer = b.z_max < a.z_min;
  if (x_ov && y_ov && (a_nearer || b_nearer))
    return a_nearer ? Pair{K::kInFrontOf, K::kBehind} : Pair{K::kBehind, K::kInFrontOf};

  const double z_gap = std::max(0.0, std::max(a.z_min, b.z_min) - std::min(a.z_max, b.z_max));
  if (z_gap > t.near_z) return std::nullopt;

  if (x_ov) {
    if (std::abs(a.y2 - b.y1) <= t.touch_tol && a.y1 < b.y1) return Pair{K::kOn, K::kUnder};
    if (std::abs(b.y2 - a.y1) <= t.touch_tol && b.y1 < a.y1) return Pair{K::kUnder, K::kOn};
    if (a.y2 < b.y1 - t.touch_tol) return Pair{K::kAbove, K::kUnder};
    if (b.y2 < a.y1 - t.touch_tol) return Pair{K::kUnder, K::kAbove};
  }

  if (y_ov && -ox.overlap <= t.touch_tol) return Pair{K::kNextTo, K::kNextTo};
  return std::nullopt;
}

std::optional<RelationKind> relate(const Box3D& a, const Box3D& b,
                                   const RelationThresholds& t) {
  auto p = relate_pair(a, b, t);
  if (!p) return std::nullopt;
  return p->first;
}

FieldAdjacency::FieldAdjacency(DirectionField field, std::vector<SegmentId> region_ids)
    : field_(field), ids_(std::move(region_ids)), cells_(ids_.size() * ids_.size(), 0) {}

std::optional<RelationKind> FieldAdjacency::cell(std::size_t i, std::size_t j) const noexcept {
  const std::uint8_t c = cells_[i * ids_.size() + j];
  if (c == 0) return std::nullopt;
  return static_cast<RelationKind>(c);
}

void FieldAdjacency::set(std::size_t i, std::size_t j, RelationKind ab, RelationKind ba) {
  if (i == j || i >= size() || j >= size())
    throw Error(ErrorKind::kInvalidArgument, "adjacency cell out of range or on diagonal");
  cells_[i * ids_.size() + j] = static_cast<std::uint8_t>(ab);
  cells_[j * ids_.size() + i] = static_cast<std::uint8_t>(ba);
}

void FieldAdjacency::clear(std::size_t i, std::size_t j) noexcept {
  cells_[i * ids_.size() + j] = 0;
  cells_[j * ids_.size() + i] = 0;
}

std::optional<Relation> FieldAdjacency::relation(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  auto k = cell(i, j);
  if (!k) return std::nullopt;
  return Relation{*k, ids_[i], ids_[j]};
}

std::vector<Relation> FieldAdjacency::relations() const {
  std::vector<Relation> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (auto k = cell(i, j)) out.push_back({*k, ids_[i], ids_[j]});
  return out;
}

FieldAdjacency FieldAdjacency::without(std::span<const SegmentId> ids) const {
  FieldAdjacency out = *this;
  for (SegmentId id : ids) {
    auto idx = index_of(id);
    if (!idx) continue;
    for (std::size_t j = 0; j < size(); ++j) out.cells_[*idx * size() + j] = 0;
    for (std::size_t i = 0; i < size(); ++i) out.cells_[i * size() + *idx] = 0;
  }
  return out;
}

std::optional<std::size_t> FieldAdjacency::index_of(SegmentId id) const noexcept {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::array<FieldAdjacency, 3> build_adjacency(std::span<const FieldBox> boxes,
                                              const RelationThresholds& t) {
  constexpr std::array<DirectionField, 3> kOrder = {DirectionField::kLeft, DirectionField::kFront,
                                                    DirectionField::kRight};
  std::array<FieldAdjacency, 3> out;
  for (std::size_t f = 0; f < kOrder.size(); ++f) {
    std::vector<const Box3D*> members;
    for (const FieldBox& fb : boxes)
      if (fb.field == kOrder[f]) members.push_back(&fb.box);
    std::sort(members.begin(), members.end(),
              [](const Box3D* a, const Box3D* b) { return a->id < b->id; });
    std::vector<SegmentId> ids;
    ids.reserve(members.size());
    for (const Box3D* b : members) ids.push_back(b->id);
    FieldAdjacency adj(kOrder[f], std::move(ids));
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        if (auto p = relate_pair(*members[i], *members[j], t)) adj.set(i, j, p->first, p->second);
    out[f] = std::move(adj);
  }
  return out;
}

GroundBackground detect_ground_background(std::span<const Box3D> boxes) {
  if (boxes.empty())
    throw Error(ErrorKind::kInvalidArgument, "ground/background of an empty region set");
  const Box3D* ground = &boxes[0];
  const Box3D* back = &boxes[0];
  for (const Box3D& b : boxes) {
    if (b.centroid_y > ground->centroid_y ||
        (b.centroid_y == ground->centroid_y && b.id < ground->id))
      ground = &b;
    if (b.z_mean > back->z_mean || (b.z_mean == back->z_mean && b.id < back->id)) back = &b;
  }
  return {ground->id, back->id};
}

}  // namespace egoscene
