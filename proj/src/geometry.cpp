#include "egoscene/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace egoscene {

namespace {

constexpr double kSideLimitDeg = 75.0;
constexpr long long kParallelPixels = 1 << 14;

struct PixelSums {
  long long sum_x = 0;
  long long sum_y = 0;
  std::size_t pixels = 0;
  std::uint64_t sum_z = 0;
  std::size_t valid = 0;
};

Centroid3D finish(const PixelSums& s) {
  if (s.valid == 0)
    throw Error(ErrorKind::kNoValidDepth, "region interior has no valid depth pixels");
  Centroid3D c;
  c.x_img = static_cast<double>(s.sum_x) / static_cast<double>(s.pixels);
  c.y_img = static_cast<double>(s.sum_y) / static_cast<double>(s.pixels);
  c.z = static_cast<double>(s.sum_z) / static_cast<double>(s.valid);
  return c;
}

PixelRect clipped_bounds(std::span<const Point2d> polygon, const DepthMap& map) {
  PixelRect r = bounding_rect(polygon);
  r.x1 = std::max(r.x1, 0);
  r.y1 = std::max(r.y1, 0);
  r.x2 = std::min(r.x2, map.width() - 1);
  r.y2 = std::min(r.y2, map.height() - 1);
  return r;
}

// Horizontal extent of a convex polygon on row y, or an empty range.
std::pair<double, double> row_extent(const std::vector<Point2d>& hull, double y) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2d a = hull[i];
    const Point2d b = hull[(i + 1) % hull.size()];
    if (y < std::min(a.y, b.y) || y > std::max(a.y, b.y)) continue;
    if (a.y == b.y) {
      lo = std::min({lo, a.x, b.x});
      hi = std::max({hi, a.x, b.x});
    } else {
      const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  return {lo, hi};
}

}  // namespace

void CameraModel::validate(ImageSize image) const {
  if (!(focal_px > 0.0) || !std::isfinite(focal_px))
    throw Error(ErrorKind::kConfig, "focal length must be positive, got " +
                                        std::to_string(focal_px));
  if (!(principal_x >= 0.0 && principal_x < image.width))
    throw Error(ErrorKind::kConfig, "principal_x " + std::to_string(principal_x) +
                                        " outside image width " + std::to_string(image.width));
  if (!(principal_y >= 0.0 && principal_y < image.height))
    throw Error(ErrorKind::kConfig, "principal_y " + std::to_string(principal_y) +
                                        " outside image height " + std::to_string(image.height));
}

std::string_view to_string(DirectionField f) noexcept {
  switch (f) {
    case DirectionField::kLeft: return "left";
    case DirectionField::kFront: return "front";
    case DirectionField::kRight: return "right";
  }
  return "front";
}

Centroid3D region_centroid(std::span<const Point2d> polygon, const DepthMap& map) {
  const ConvexHull hull(polygon);
  const PixelRect r = clipped_bounds(polygon, map);
  if (hull.vertices().size() < 3 || r.x1 > r.x2 || r.y1 > r.y2)
    return reference::region_centroid(polygon, map);

  const auto& verts = hull.vertices();
  long long sum_x = 0, sum_y = 0;
  std::size_t pixels = 0, valid = 0;
  std::uint64_t sum_z = 0;
  const bool parallel =
      static_cast<long long>(r.x2 - r.x1 + 1) * (r.y2 - r.y1 + 1) >= kParallelPixels;

#pragma omp parallel for schedule(static) if (parallel) \
    reduction(+ : sum_x, sum_y, pixels, valid, sum_z)
  for (int y = r.y1; y <= r.y2; ++y) {
    const auto [lo_f, hi_f] = row_extent(verts, y);
    if (lo_f > hi_f) continue;
    int lo = std::max(r.x1, static_cast<int>(std::ceil(lo_f - 1e-6)));
    int hi = std::min(r.x2, static_cast<int>(std::floor(hi_f + 1e-6)));
    // Snap the span ends onto the exact membership test.
    while (lo <= hi && !hull.contains({double(lo), double(y)})) ++lo;
    while (lo > r.x1 && hull.contains({double(lo - 1), double(y)})) --lo;
    while (hi >= lo && !hull.contains({double(hi), double(y)})) --hi;
    while (hi < r.x2 && hi >= lo && hull.contains({double(hi + 1), double(y)})) ++hi;
    if (lo > hi) continue;

    const long long n = hi - lo + 1;
    pixels += static_cast<std::size_t>(n);
    sum_x += n * (lo + hi) / 2;
    sum_y += n * y;
    auto row = map.row(y);
    for (int x = lo; x <= hi; ++x) {
      const DepthValue v = row[x];
      if (map.is_sentinel(v)) continue;
      sum_z += v;
      ++valid;
    }
  }
  PixelSums s;
  s.sum_x = sum_x;
  s.sum_y = sum_y;
  s.pixels = pixels;
  s.sum_z = sum_z;
  s.valid = valid;
  return finish(s);
}

double back_project(double x_img, double z, const CameraModel& cam) noexcept {
  return (x_img - cam.principal_x) * z / cam.focal_px;
}

Centroid3D locate(Centroid3D c, const CameraModel& cam) noexcept {
  c.x_w = back_project(c.x_img, c.z, cam);
  return c;
}

double direction_angle(const Centroid3D& c) {
  if (c.z == 0.0 && c.x_w == 0.0)
    throw Error(ErrorKind::kUndefinedDirection, "direction of a zero vector is undefined");
  if (c.x_w == 0.0) return 90.0;
  constexpr double kDeg = 180.0 / std::numbers::pi;
  // atan of z/x_w folded into [-90, 90]; atan2 avoids the division.
  const double a = std::atan2(c.z, std::abs(c.x_w)) * kDeg;
  return c.x_w > 0.0 ? a : -a;
}

DirectionField classify_direction(double theta_deg) {
  if (!(theta_deg >= -90.0 && theta_deg <= 90.0))
    throw Error(ErrorKind::kInvalidArgument,
                "direction angle " + std::to_string(theta_deg) + " outside [-90, 90]");
  if (theta_deg >= 0.0 && theta_deg <= kSideLimitDeg) return DirectionField::kRight;
  if (theta_deg < 0.0 && theta_deg >= -kSideLimitDeg) return DirectionField::kLeft;
  return DirectionField::kFront;
}

Direction direction_of(const Centroid3D& located) {
  const double theta = direction_angle(located);
  return {classify_direction(theta), theta};
}

namespace reference {

Centroid3D region_centroid(std::span<const Point2d> polygon, const DepthMap& map) {
  const ConvexHull hull(polygon);
  const PixelRect r = clipped_bounds(polygon, map);
  PixelSums s;
  for (int y = r.y1; y <= r.y2; ++y) {
    for (int x = r.x1; x <= r.x2; ++x) {
      if (!hull.contains({double(x), double(y)})) continue;
      s.sum_x += x;
      s.sum_y += y;
      ++s.pixels;
      const DepthValue v = map.at(x, y);
      if (map.is_sentinel(v)) continue;
      s.sum_z += v;
      ++s.valid;
    }
  }
  return finish(s);
}

}  // namespace reference

}  // namespace egoscene
