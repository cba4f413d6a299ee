#include "oracles.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>

namespace oracle {

namespace {

double is_left(Point2d a, Point2d b, Point2d p) {
  return (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
}

bool on_segment(Point2d p, Point2d a, Point2d b) {
  const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y)});
  if (std::abs(is_left(a, b, p)) > 1e-9 * scale * scale) return false;
  return p.x >= std::min(a.x, b.x) - 1e-9 && p.x <= std::max(a.x, b.x) + 1e-9 &&
         p.y >= std::min(a.y, b.y) - 1e-9 && p.y <= std::max(a.y, b.y) + 1e-9;
}

}  // namespace

int winding_number(Point2d p, const std::vector<Point2d>& poly) {
  int wn = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2d a = poly[i];
    const Point2d b = poly[(i + 1) % poly.size()];
    if (a.y <= p.y) {
      if (b.y > p.y && is_left(a, b, p) > 0) ++wn;
    } else {
      if (b.y <= p.y && is_left(a, b, p) < 0) --wn;
    }
  }
  return wn;
}

bool in_hull(Point2d p, const std::vector<Point2d>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == p) return true;
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (on_segment(p, v[i], v[j])) return true;
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      for (std::size_t k = j + 1; k < v.size(); ++k)
        if (winding_number(p, {v[i], v[j], v[k]}) != 0) return true;
  return false;
}

AxisFacts scan_axis(int a1, int a2, int b1, int b2) {
  AxisFacts f;
  const int lo = std::min(a1, b1) - 1;
  const int hi = std::max(a2, b2) + 1;
  int a_min = INT_MAX, a_max = INT_MIN, b_min = INT_MAX, b_max = INT_MIN;
  bool a_in_b = true, b_in_a = true;
  f.point_distance = INT_MAX;
  for (int k = lo; k <= hi; ++k) {
    const bool cell_a = k >= a1 && k + 1 <= a2;
    const bool cell_b = k >= b1 && k + 1 <= b2;
    f.cells_a += cell_a;
    f.cells_b += cell_b;
    f.shared_cells += cell_a && cell_b;

    const bool pa = k >= a1 && k <= a2;
    const bool pb = k >= b1 && k <= b2;
    if (pa) {
      a_min = std::min(a_min, k);
      a_max = std::max(a_max, k);
      if (!pb) a_in_b = false;
    }
    if (pb) {
      b_min = std::min(b_min, k);
      b_max = std::max(b_max, k);
      if (!pa) b_in_a = false;
    }
    if (pa)
      for (int q = lo; q <= hi; ++q)
        if (q >= b1 && q <= b2) f.point_distance = std::min(f.point_distance, std::abs(k - q));
  }
  f.b_start_after_a_end = b_min - a_max;
  f.a_start_after_b_end = a_min - b_max;
  f.a_within_b = a_in_b;
  f.b_within_a = b_in_a;
  f.a_starts_first = a_min < b_min;
  f.b_starts_first = b_min < a_min;
  return f;
}

DepthFacts scan_depth(int a1, int a2, int b1, int b2, double unit_mm) {
  // Half-unit samples of both closed intervals, in doubled integer units.
  std::vector<int> sa, sb;
  for (int s = 2 * a1; s <= 2 * a2; ++s) sa.push_back(s);
  for (int s = 2 * b1; s <= 2 * b2; ++s) sb.push_back(s);
  DepthFacts f;
  int best = INT_MAX;
  for (int p : sa)
    for (int q : sb) best = std::min(best, std::abs(p - q));
  f.disjoint = best > 0;
  f.gap_mm = best * unit_mm / 2.0;
  f.a_nearer = f.disjoint && sa.back() < sb.front();
  auto subset = [](const std::vector<int>& x, const std::vector<int>& y) {
    return std::all_of(x.begin(), x.end(),
                       [&](int v) { return std::find(y.begin(), y.end(), v) != y.end(); });
  };
  f.a_within_b = subset(sa, sb);
  f.b_within_a = subset(sb, sa);
  return f;
}

std::optional<RelationKind> classify(const AxisFacts& x, const AxisFacts& y, const DepthFacts& z,
                                     const egoscene::RelationThresholds& t) {
  using K = RelationKind;
  if ((x.a_within_b && y.a_within_b && z.a_within_b) || (x.b_within_a && y.b_within_a && z.b_within_a))
    return std::nullopt;
  auto overlapping = [&](const AxisFacts& f) {
    return f.shared_cells > 0 && f.shared_cells >= t.overlap_min * std::min(f.cells_a, f.cells_b);
  };
  const bool x_ov = overlapping(x);
  const bool y_ov = overlapping(y);
  if (x_ov && y_ov && z.disjoint) return z.a_nearer ? K::kInFrontOf : K::kBehind;
  if (z.gap_mm > t.near_z) return std::nullopt;
  if (x_ov) {
    // y grows downward: b_start_after_a_end is b's top minus a's bottom.
    if (std::abs(y.b_start_after_a_end) <= t.touch_tol && y.a_starts_first) return K::kOn;
    if (std::abs(y.a_start_after_b_end) <= t.touch_tol && y.b_starts_first) return K::kUnder;
    if (y.b_start_after_a_end > t.touch_tol) return K::kAbove;
    if (y.a_start_after_b_end > t.touch_tol) return K::kUnder;
  }
  if (y_ov && x.point_distance <= t.touch_tol) return K::kNextTo;
  return std::nullopt;
}

namespace {

struct TrailSearch {
  const std::vector<std::pair<int, int>>& edges;
  std::map<std::pair<unsigned, int>, int> memo;

  // Fewest extra trails needed once `used` is covered and the open trail
  // (if any) ends at `at`; at == -1 means no trail is open.
  int solve(unsigned used, int at) {
    const unsigned all = (1u << edges.size()) - 1;
    if (used == all) return 0;
    auto key = std::make_pair(used, at);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int best = INT_MAX;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (used & (1u << e)) continue;
      const auto [u, v] = edges[e];
      const unsigned next = used | (1u << e);
      if (at >= 0) {
        if (u == at) best = std::min(best, solve(next, v));
        if (v == at) best = std::min(best, solve(next, u));
      }
      // Open a fresh trail on this edge, in either direction.
      best = std::min(best, 1 + solve(next, v));
      best = std::min(best, 1 + solve(next, u));
    }
    memo[key] = best;
    return best;
  }
};

}  // namespace

int min_trail_cover(int /*vertices*/, const std::vector<std::pair<int, int>>& edges) {
  if (edges.empty()) return 0;
  TrailSearch search{edges, {}};
  return search.solve(0u, -1);
}

}  // namespace oracle
