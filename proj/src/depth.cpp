#include "egoscene/depth.hpp"

#include <algorithm>
#include <string>

namespace egoscene {

namespace {

// Below this many pixels the OpenMP fork costs more than the loop.
constexpr long long kParallelPixels = 1 << 14;

void check_kernel(const DepthMap& map, int kernel) {
  if (kernel < 1 || kernel % 2 == 0)
    throw Error(ErrorKind::kInvalidArgument,
                "mean filter kernel must be a positive odd integer, got " +
                    std::to_string(kernel));
  if (kernel > std::min(map.width(), map.height()))
    throw Error(ErrorKind::kInvalidArgument,
                "mean filter kernel " + std::to_string(kernel) +
                    " exceeds image extent " + std::to_string(map.width()) +
                    "x" + std::to_string(map.height()));
}

void check_box(const DepthMap& map, const PixelRect& box) {
  if (box.x1 > box.x2 || box.y1 > box.y2 || !box.within(map.size()))
    throw Error(ErrorKind::kInvalidArgument,
                "box " + to_string(box) + " is not inside the " +
                    std::to_string(map.width()) + "x" +
                    std::to_string(map.height()) + " depth map");
}

inline int clamp_index(int i, int n) noexcept {
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

inline DepthValue round_mean(std::uint64_t sum, std::uint64_t n) noexcept {
  return static_cast<DepthValue>((sum + n / 2) / n);
}

RegionDepthStats finish_stats(std::uint64_t sum, DepthValue max_v,
                              std::size_t count) {
  if (count == 0)
    throw Error(ErrorKind::kNoValidDepth, "region has no valid depth pixels");
  RegionDepthStats s;
  s.valid_count = count;
  s.z_mean = static_cast<double>(sum) / static_cast<double>(count);
  s.z_max = max_v;
  s.z_min_est = 2.0 * s.z_mean - s.z_max;
  if (s.z_min_est < 0.0) {
    s.z_min_est = 0.0;
    s.degenerate = true;
  }
  return s;
}

}  // namespace

SentinelSet::SentinelSet(std::vector<DepthValue> codes) : codes_(std::move(codes)) {
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

DepthMap::DepthMap(int width, int height, DepthValue fill, SentinelSet sentinels)
    : width_(width), height_(height), sentinels_(std::move(sentinels)) {
  if (width < 0 || height < 0)
    throw Error(ErrorKind::kInvalidArgument, "negative depth map extent");
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

DepthMap::DepthMap(int width, int height, std::vector<DepthValue> values,
                   SentinelSet sentinels)
    : width_(width),
      height_(height),
      values_(std::move(values)),
      sentinels_(std::move(sentinels)) {
  if (width < 0 || height < 0 ||
      values_.size() != static_cast<std::size_t>(width) * height)
    throw Error(ErrorKind::kInvalidArgument,
                "depth map holds " + std::to_string(values_.size()) +
                    " values, expected " + std::to_string(width) + "x" +
                    std::to_string(height));
}

DepthMap mean_filter(const DepthMap& map, int kernel) {
  check_kernel(map, kernel);
  const int w = map.width();
  const int h = map.height();
  const int r = kernel / 2;
  const auto n = static_cast<std::uint64_t>(kernel) * kernel;

  // Separable: horizontal window sums first, then vertical sums of those.
  std::vector<std::uint32_t> row_sums(static_cast<std::size_t>(w) * h);
  const bool parallel = static_cast<long long>(w) * h >= kParallelPixels;

#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < h; ++y) {
    auto src = map.row(y);
    std::uint32_t* dst = row_sums.data() + static_cast<std::size_t>(y) * w;
    std::uint32_t sum = 0;
    for (int dx = -r; dx <= r; ++dx) sum += src[clamp_index(dx, w)];
    dst[0] = sum;
    for (int x = 1; x < w; ++x) {
      sum += src[clamp_index(x + r, w)];
      sum -= src[clamp_index(x - r - 1, w)];
      dst[x] = sum;
    }
  }

  std::vector<DepthValue> out(static_cast<std::size_t>(w) * h);
#pragma omp parallel for schedule(static) if (parallel)
  for (int y = 0; y < h; ++y) {
    DepthValue* dst = out.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      std::uint64_t sum = 0;
      for (int dy = -r; dy <= r; ++dy)
        sum += row_sums[static_cast<std::size_t>(clamp_index(y + dy, h)) * w + x];
      dst[x] = round_mean(sum, n);
    }
  }
  return DepthMap(w, h, std::move(out), map.sentinels());
}

RegionDepthStats region_depth_stats(const DepthMap& map, const PixelRect& box) {
  check_box(map, box);
  std::uint64_t sum = 0;
  std::size_t count = 0;
  DepthValue max_v = 0;
  const bool parallel =
      static_cast<long long>(box.x2 - box.x1 + 1) * (box.y2 - box.y1 + 1) >=
      kParallelPixels;

#pragma omp parallel for schedule(static) if (parallel) \
    reduction(+ : sum, count) reduction(max : max_v)
  for (int y = box.y1; y <= box.y2; ++y) {
    auto row = map.row(y);
    for (int x = box.x1; x <= box.x2; ++x) {
      const DepthValue v = row[x];
      if (map.is_sentinel(v)) continue;
      sum += v;
      ++count;
      max_v = std::max(max_v, v);
    }
  }
  return finish_stats(sum, max_v, count);
}

RegionDepthStats region_depth_stats(std::span<const DepthValue> pixels,
                                    const SentinelSet& sentinels) {
  std::uint64_t sum = 0;
  std::size_t count = 0;
  DepthValue max_v = 0;
  for (DepthValue v : pixels) {
    if (sentinels.contains(v)) continue;
    sum += v;
    ++count;
    max_v = std::max(max_v, v);
  }
  return finish_stats(sum, max_v, count);
}

namespace reference {

DepthMap mean_filter(const DepthMap& map, int kernel) {
  check_kernel(map, kernel);
  const int w = map.width();
  const int h = map.height();
  const int r = kernel / 2;
  const auto n = static_cast<std::uint64_t>(kernel) * kernel;
  DepthMap out(w, h, DepthValue{0}, map.sentinels());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint64_t sum = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          sum += map.at(clamp_index(x + dx, w), clamp_index(y + dy, h));
      out.at(x, y) = round_mean(sum, n);
    }
  }
  return out;
}

RegionDepthStats region_depth_stats(const DepthMap& map, const PixelRect& box) {
  check_box(map, box);
  std::vector<DepthValue> pixels;
  for (int y = box.y1; y <= box.y2; ++y)
    for (int x = box.x1; x <= box.x2; ++x) pixels.push_back(map.at(x, y));
  return egoscene::region_depth_stats(pixels, map.sentinels());
}

}  // namespace reference

}  // namespace egoscene
