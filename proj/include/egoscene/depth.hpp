#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "egoscene/core.hpp"

namespace egoscene {

using DepthValue = std::uint16_t;

/// Depth codes that mark invalid sensor readings. Kinect v1 reports both 0 and
/// 4000 mm when it has no return.
class SentinelSet {
 public:
  SentinelSet() : SentinelSet({0, 4000}) {}
  explicit SentinelSet(std::vector<DepthValue> codes);

  bool contains(DepthValue v) const noexcept {
    for (DepthValue c : codes_)
      if (c == v) return true;
    return false;
  }
  const std::vector<DepthValue>& codes() const noexcept { return codes_; }

 private:
  std::vector<DepthValue> codes_;
};

/// Dense row-major grid of millimetre depths.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, DepthValue fill = 0,
           SentinelSet sentinels = {});
  DepthMap(int width, int height, std::vector<DepthValue> values,
           SentinelSet sentinels = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  ImageSize size() const noexcept { return {width_, height_}; }

  DepthValue at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  DepthValue& at(int x, int y) noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::span<const DepthValue> row(int y) const noexcept {
    return {values_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const DepthValue> values() const noexcept { return values_; }

  const SentinelSet& sentinels() const noexcept { return sentinels_; }
  void set_sentinels(SentinelSet s) { sentinels_ = std::move(s); }
  bool is_sentinel(DepthValue v) const noexcept { return sentinels_.contains(v); }

  friend bool operator==(const DepthMap& a, const DepthMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.values_ == b.values_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<DepthValue> values_;
  SentinelSet sentinels_;
};

struct RegionDepthStats {
  double z_mean = 0.0;
  double z_max = 0.0;
  // 2 * z_mean - z_max: the far face mirrored about the mean, which stays
  // clear of residual zero pixels that would otherwise win a plain minimum.
  double z_min_est = 0.0;
  std::size_t valid_count = 0;
  // z_min_est went negative and was clamped to 0.
  bool degenerate = false;
};

/// Box filter with edge replication; results round half-up to whole mm.
/// Sentinel pixels take part in the average with their raw value.
DepthMap mean_filter(const DepthMap& map, int kernel);

/// Mean and max over the non-sentinel pixels of `box` (inclusive bounds).
/// Throws kInvalidArgument when the box leaves the map and kNoValidDepth when
/// every pixel is a sentinel.
RegionDepthStats region_depth_stats(const DepthMap& map, const PixelRect& box);

/// Same statistics over an explicit pixel list; used for polygon interiors.
RegionDepthStats region_depth_stats(std::span<const DepthValue> pixels,
                                    const SentinelSet& sentinels);

namespace reference {

// Straightforward serial versions of the kernels above. They are kept for
// cross-checking the OpenMP paths in tests and for benchmarking.
DepthMap mean_filter(const DepthMap& map, int kernel);
RegionDepthStats region_depth_stats(const DepthMap& map, const PixelRect& box);

}  // namespace reference

}  // namespace egoscene
