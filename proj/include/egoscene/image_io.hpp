#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "egoscene/depth.hpp"

namespace egoscene {

/// 16-bit single channel raster as stored on disk.
struct Gray16Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> pixels;
};

/// Reads a 16-bit grayscale PNG or binary PGM (P5, maxval > 255). The format is
/// picked from the file magic. Missing or unreadable files raise kIo; anything
/// that is not 16-bit single channel raises kParse.
Gray16Image read_gray16(const std::filesystem::path& path);

void write_pgm16(const std::filesystem::path& path, const Gray16Image& image);
void write_png16(const std::filesystem::path& path, const Gray16Image& image);

DepthMap load_depth(const std::filesystem::path& path, SentinelSet sentinels = {});
void save_depth(const std::filesystem::path& path, const DepthMap& map);

}  // namespace egoscene
