#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace egoscene {

enum class ErrorKind {
  kInvalidArgument,
  kNoValidDepth,
  kNotFound,
  kParse,
  kConsistency,
  kUndefinedDirection,
  kIo,
  kConfig,
  kGeneration,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

using SegmentId = std::uint32_t;

struct ImageSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

struct Point2d {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2d&, const Point2d&) = default;
};

/// Axis-aligned pixel rectangle. (x1, y1) and (x2, y2) are the first and last
/// covered pixel, so pixel scans run over [x1, x2] x [y1, y2] inclusive while
/// area() and overlap arithmetic use the continuous extent x2 - x1.
struct PixelRect {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  int width() const noexcept { return x2 - x1; }
  int height() const noexcept { return y2 - y1; }
  long long area() const noexcept {
    return static_cast<long long>(width()) * height();
  }
  bool valid() const noexcept { return x1 < x2 && y1 < y2; }
  bool within(ImageSize size) const noexcept {
    return x1 >= 0 && y1 >= 0 && x2 < size.width && y2 < size.height;
  }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

std::string to_string(const PixelRect& r);

}  // namespace egoscene
