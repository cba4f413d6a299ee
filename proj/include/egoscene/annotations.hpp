#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egoscene/core.hpp"

namespace egoscene {

struct Segment {
  SegmentId id = 0;
  std::string caption;
  std::vector<Point2d> polygon;  // at least three vertices
  PixelRect bbox;                // tight pixel bound of `polygon`
};

/// Per-pixel segment labels; pixels outside every segment hold kBackground.
struct SegmentMask {
  static constexpr std::uint16_t kBackground = 0xFFFF;

  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> labels;

  SegmentMask() = default;
  SegmentMask(int w, int h)
      : width(w), height(h), labels(static_cast<std::size_t>(w) * h, kBackground) {}

  std::uint16_t at(int x, int y) const noexcept {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint16_t& at(int x, int y) noexcept {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
};

struct ParsedAnnotations {
  std::vector<Segment> segments;
  std::optional<ImageSize> image_size;
  std::vector<std::string> warnings;  // e.g. vertices clamped into the image
};

/// Parses a LabelMe-style document: {"shapes": [{"label": ..., "points":
/// [[x, y], ...]}, ...]}. Ids follow the order of the shapes. Vertices are
/// clamped into `bounds` (or into imageWidth/imageHeight from the document
/// when `bounds` is empty), with a warning per clamped shape.
ParsedAnnotations parse_annotations(std::string_view document,
                                    std::optional<ImageSize> bounds = std::nullopt);

/// Tight inclusive pixel bound of a vertex list.
PixelRect bounding_rect(std::span<const Point2d> vertices);

/// Convex hull of a point set with an inclusive membership test. A point is
/// inside iff it is a convex combination of the input vertices, so points on
/// the hull boundary count as inside. Degenerate inputs (one point, collinear
/// points) reduce to a point or a segment.
class ConvexHull {
 public:
  explicit ConvexHull(std::span<const Point2d> vertices);

  bool contains(Point2d p) const noexcept;
  // Counter-clockwise hull vertices without repetition.
  const std::vector<Point2d>& vertices() const noexcept { return hull_; }

 private:
  std::vector<Point2d> hull_;
  double eps_ = 0.0;
};

/// True iff `point` is a convex combination of `vertices`.
bool in_hull(Point2d point, std::span<const Point2d> vertices);

/// Bounding box (inclusive) of the largest 4-connected component labelled `id`.
/// Ties between equally large components go to the one met first in raster
/// order. Throws kNotFound when `id` does not occur.
PixelRect mask_to_bbox(const SegmentMask& mask, std::uint16_t id);

/// Intersection over union of the continuous rectangles. Zero-area inputs
/// throw kInvalidArgument.
double iou(const PixelRect& a, const PixelRect& b);

/// For every target, the index of the candidate with the highest IoU; ties go
/// to the lowest index.
std::vector<std::size_t> best_box_match(std::span<const PixelRect> candidates,
                                        std::span<const PixelRect> targets);

}  // namespace egoscene
