#pragma once

#include <span>
#include <string_view>

#include "egoscene/annotations.hpp"
#include "egoscene/depth.hpp"

namespace egoscene {

/// Pinhole intrinsics. Defaults are the Kinect v1 values for 640x480 frames.
struct CameraModel {
  double focal_px = 580.0;
  double principal_x = 319.5;
  double principal_y = 239.5;

  /// Throws kConfig unless focal_px > 0 and the principal point lies in the image.
  void validate(ImageSize image) const;
};

struct Centroid3D {
  double x_img = 0.0;  // mean pixel column
  double y_img = 0.0;  // mean pixel row
  double z = 0.0;      // mean valid depth, mm
  double x_w = 0.0;    // lateral world offset, mm; filled by locate()
};

enum class DirectionField { kLeft, kFront, kRight };

std::string_view to_string(DirectionField f) noexcept;

struct Direction {
  DirectionField field = DirectionField::kFront;
  double theta_deg = 90.0;
};

/// Mean pixel position of every pixel inside the polygon's convex hull and
/// mean of their non-sentinel depths. Throws kNoValidDepth when the interior
/// holds no valid depth.
Centroid3D region_centroid(std::span<const Point2d> polygon, const DepthMap& map);

/// Lateral world coordinate of an image column at depth z.
double back_project(double x_img, double z, const CameraModel& cam) noexcept;

/// Copy of `c` with x_w filled in.
Centroid3D locate(Centroid3D c, const CameraModel& cam) noexcept;

/// Angle of the centroid ray in the XZ plane against the X axis, in degrees in
/// [-90, 90]: arctan(z / x_w) with x_w == 0 resolved to 90. Throws
/// kUndefinedDirection for the zero vector.
double direction_angle(const Centroid3D& c);

/// Right for [0, 75], Left for [-75, 0), Front for the remaining 30 degrees.
DirectionField classify_direction(double theta_deg);

Direction direction_of(const Centroid3D& located);

namespace reference {

Centroid3D region_centroid(std::span<const Point2d> polygon, const DepthMap& map);

}  // namespace reference

}  // namespace egoscene
