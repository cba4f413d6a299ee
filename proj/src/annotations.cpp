#include "egoscene/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <json.hpp>

namespace egoscene {

namespace {

using nlohmann::json;

double cross(Point2d o, Point2d a, Point2d b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Point2d read_point(const json& pt, std::size_t shape, std::size_t index) {
  if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
    throw Error(ErrorKind::kParse, "shape " + std::to_string(shape) + ": point " +
                                       std::to_string(index) + " is not an [x, y] pair");
  return {pt[0].get<double>(), pt[1].get<double>()};
}

}  // namespace

PixelRect bounding_rect(std::span<const Point2d> vertices) {
  if (vertices.empty())
    throw Error(ErrorKind::kInvalidArgument, "bounding_rect of an empty vertex list");
  double lo_x = vertices[0].x, hi_x = vertices[0].x;
  double lo_y = vertices[0].y, hi_y = vertices[0].y;
  for (const Point2d& p : vertices) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  return {static_cast<int>(std::floor(lo_x)), static_cast<int>(std::floor(lo_y)),
          static_cast<int>(std::ceil(hi_x)), static_cast<int>(std::ceil(hi_y))};
}

ParsedAnnotations parse_annotations(std::string_view document,
                                    std::optional<ImageSize> bounds) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse,
                "malformed annotation JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("shapes") || !doc["shapes"].is_array())
    throw Error(ErrorKind::kParse, "annotation document has no \"shapes\" array");

  ParsedAnnotations out;
  if (bounds) {
    out.image_size = bounds;
  } else if (doc.contains("imageWidth") && doc.contains("imageHeight") &&
             doc["imageWidth"].is_number_integer() && doc["imageHeight"].is_number_integer()) {
    out.image_size = ImageSize{doc["imageWidth"].get<int>(), doc["imageHeight"].get<int>()};
  }

  const json& shapes = doc["shapes"];
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const json& shape = shapes[i];
    const std::string where = "shape " + std::to_string(i);
    if (!shape.is_object())
      throw Error(ErrorKind::kParse, where + " is not an object");
    if (!shape.contains("label") || !shape["label"].is_string())
      throw Error(ErrorKind::kParse, where + ": missing string \"label\"");
    if (!shape.contains("points") || !shape["points"].is_array())
      throw Error(ErrorKind::kParse, where + ": missing \"points\" array");
    const json& points = shape["points"];
    if (points.size() < 3)
      throw Error(ErrorKind::kParse, where + ": polygon needs at least 3 points, has " +
                                         std::to_string(points.size()));

    Segment seg;
    seg.id = static_cast<SegmentId>(i);
    seg.caption = shape["label"].get<std::string>();
    seg.polygon.reserve(points.size());
    bool clamped = false;
    for (std::size_t k = 0; k < points.size(); ++k) {
      Point2d p = read_point(points[k], i, k);
      if (out.image_size) {
        const double max_x = out.image_size->width - 1;
        const double max_y = out.image_size->height - 1;
        const Point2d c{std::clamp(p.x, 0.0, max_x), std::clamp(p.y, 0.0, max_y)};
        clamped = clamped || c != p;
        p = c;
      }
      seg.polygon.push_back(p);
    }
    if (clamped)
      out.warnings.push_back(where + " (\"" + seg.caption +
                             "\"): vertices clamped into the image bounds");
    seg.bbox = bounding_rect(seg.polygon);
    if (!seg.bbox.valid())
      throw Error(ErrorKind::kParse, where + ": polygon has a zero-area bounding box " +
                                         to_string(seg.bbox));
    out.segments.push_back(std::move(seg));
  }
  return out;
}

ConvexHull::ConvexHull(std::span<const Point2d> vertices) {
  if (vertices.empty())
    throw Error(ErrorKind::kInvalidArgument, "convex hull of an empty vertex list");
  std::vector<Point2d> pts(vertices.begin(), vertices.end());
  std::sort(pts.begin(), pts.end(), [](Point2d a, Point2d b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double scale = 1.0;
  for (const Point2d& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  eps_ = 1e-9 * scale * scale;

  if (pts.size() < 3) {
    hull_ = pts;
    return;
  }
  // Andrew's monotone chain, collinear points dropped.
  std::vector<Point2d> h(2 * pts.size());
  std::size_t k = 0;
  for (const Point2d& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= eps_) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= eps_) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  hull_ = std::move(h);
}

bool ConvexHull::contains(Point2d p) const noexcept {
  if (hull_.size() == 1) return hull_[0] == p;
  if (hull_.size() == 2) {
    const Point2d a = hull_[0], b = hull_[1];
    if (std::abs(cross(a, b, p)) > eps_) return false;
    const double dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
    const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    return dot >= -eps_ && dot <= len2 + eps_;
  }
  for (std::size_t i = 0; i < hull_.size(); ++i) {
    const Point2d a = hull_[i];
    const Point2d b = hull_[(i + 1) % hull_.size()];
    if (cross(a, b, p) < -eps_) return false;
  }
  return true;
}

bool in_hull(Point2d point, std::span<const Point2d> vertices) {
  return ConvexHull(vertices).contains(point);
}

PixelRect mask_to_bbox(const SegmentMask& mask, std::uint16_t id) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  std::deque<int> queue;
  std::size_t best_size = 0;
  PixelRect best;

  for (int start = 0; start < w * h; ++start) {
    if (seen[start] || mask.labels[start] != id) continue;
    seen[start] = 1;
    queue.push_back(start);
    std::size_t size = 0;
    PixelRect r{start % w, start / w, start % w, start / w};
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      ++size;
      const int x = cur % w, y = cur / w;
      r.x1 = std::min(r.x1, x);
      r.x2 = std::max(r.x2, x);
      r.y1 = std::min(r.y1, y);
      r.y2 = std::max(r.y2, y);
      const int nbrs[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& n : nbrs) {
        if (n[0] < 0 || n[1] < 0 || n[0] >= w || n[1] >= h) continue;
        const int idx = n[1] * w + n[0];
        if (seen[idx] || mask.labels[idx] != id) continue;
        seen[idx] = 1;
        queue.push_back(idx);
      }
    }
    if (size > best_size) {
      best_size = size;
      best = r;
    }
  }
  if (best_size == 0)
    throw Error(ErrorKind::kNotFound, "segment id " + std::to_string(id) + " not in mask");
  return best;
}

double iou(const PixelRect& a, const PixelRect& b) {
  if (!a.valid() || !b.valid())
    throw Error(ErrorKind::kInvalidArgument,
                "iou of degenerate rectangle " + to_string(a.valid() ? b : a));
  const long long iw = std::max(0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const long long ih = std::max(0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const long long inter = iw * ih;
  const long long uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::size_t> best_box_match(std::span<const PixelRect> candidates,
                                        std::span<const PixelRect> targets) {
  if (candidates.empty() || targets.empty())
    throw Error(ErrorKind::kInvalidArgument, "best_box_match needs non-empty inputs");
  std::vector<std::size_t> out;
  out.reserve(targets.size());
  for (const PixelRect& t : targets) {
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double score = iou(candidates[i], t);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace egoscene
