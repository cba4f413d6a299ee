#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the code paths it is used to check.

#include <optional>
#include <utility>
#include <vector>

#include "egoscene/core.hpp"
#include "egoscene/relations.hpp"

namespace oracle {

using egoscene::Point2d;
using egoscene::RelationKind;

/// Point-in-convex-hull by Caratheodory: p is in the hull iff it lies on a
/// segment between two vertices or inside some vertex triangle, the latter
/// decided by a winding number.
bool in_hull(Point2d p, const std::vector<Point2d>& vertices);

int winding_number(Point2d p, const std::vector<Point2d>& polygon);

/// Facts about two closed integer intervals, found by scanning lattice points.
struct AxisFacts {
  int shared_cells = 0;     // unit cells [k, k+1) covered by both
  int cells_a = 0;
  int cells_b = 0;
  int point_distance = 0;   // smallest |p - q| over integer points p in a, q in b
  int b_start_after_a_end = 0;  // min(b) - max(a), by scanning
  int a_start_after_b_end = 0;  // min(a) - max(b)
  bool a_within_b = false;
  bool b_within_a = false;
  bool a_starts_first = false;  // min(a) < min(b)
  bool b_starts_first = false;
};

AxisFacts scan_axis(int a1, int a2, int b1, int b2);

/// Depth facts from half-unit sampling of closed intervals [a1, a2] and
/// [b1, b2] given in lattice units of `unit_mm`.
struct DepthFacts {
  bool disjoint = false;
  bool a_nearer = false;
  double gap_mm = 0.0;
  bool a_within_b = false;
  bool b_within_a = false;
};

DepthFacts scan_depth(int a1, int a2, int b1, int b2, double unit_mm);

/// Rule table re-derived from the scanned facts.
std::optional<RelationKind> classify(const AxisFacts& x, const AxisFacts& y, const DepthFacts& z,
                                     const egoscene::RelationThresholds& t);

/// Minimum number of edge-disjoint trails covering every edge, by exhaustive
/// search. Meant for graphs with a handful of edges.
int min_trail_cover(int vertices, const std::vector<std::pair<int, int>>& edges);

}  // namespace oracle
