#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egoscene/annotations.hpp"
#include "egoscene/depth.hpp"
#include "egoscene/geometry.hpp"
#include "egoscene/narration.hpp"
#include "egoscene/relations.hpp"
#include "egoscene/synthscene.hpp"

namespace egoscene {

enum class CaptionSource { kAnnotations, kExternal };

struct PipelineConfig {
  CameraModel camera;
  int kernel = 3;
  SentinelSet sentinels;
  RelationThresholds thresholds;
  CaptionSource caption_source = CaptionSource::kAnnotations;
  std::optional<std::filesystem::path> captions_path;

  /// Every key is optional: focal_px, principal_x, principal_y, kernel,
  /// sentinels, touch_tol_px, near_z_mm, overlap_min, caption_source
  /// ("annotations" | "external"), captions_path. Unknown keys and bad values
  /// throw kConfig.
  static PipelineConfig from_json(std::string_view document);
  void validate() const;
};

inline constexpr std::array<const char*, 5> kStageNames = {
    "depth_filter", "centroids", "directions", "relations", "narration"};

/// Wall time per stage in microseconds, indexed like kStageNames.
struct TimingReport {
  std::array<double, 5> stage_us{};
  double total_us = 0.0;
};

struct RegionResult {
  SegmentId id = 0;
  std::string caption;
  Centroid3D centroid;  // located: x_w filled
  Direction direction;
  Box3D box;
};

struct PipelineResult {
  std::vector<RegionResult> regions;
  std::array<FieldAdjacency, 3> adjacency;  // left, front, right
  std::optional<GroundBackground> ground_background;
  SceneDescription description;
  TimingReport timing;
};

/// Filter, centroids, directions, relations, narration. `captions`, when
/// given, replaces the annotation labels and must cover every segment.
PipelineResult run_pipeline(const DepthMap& depth, std::span<const Segment> segments,
                            const PipelineConfig& config, const CaptionMap* captions = nullptr);

/// File-level entry point: loads the depth image and annotation document
/// (and the external captions when configured) and runs the pipeline.
PipelineResult run(const std::filesystem::path& depth_path,
                   const std::filesystem::path& annotations_path, const PipelineConfig& config);

/// {"0": "a phrase", ...}
CaptionMap parse_captions(std::string_view document);

std::string report_json(const PipelineResult& result);

Prediction to_prediction(const PipelineResult& result);

std::string read_text_file(const std::filesystem::path& path);

struct SceneInput {
  std::string name;
  DepthMap depth;
  std::vector<Segment> segments;
};

/// Loads depth.pgm (or depth.png) plus annotations.json from `dir`.
SceneInput load_scene(const std::filesystem::path& dir, const PipelineConfig& config);

struct StageSummary {
  std::string stage;
  double median_us = 0.0;
  double p95_us = 0.0;
};

struct BenchReport {
  std::size_t scenes = 0;
  int repetitions = 0;
  std::vector<StageSummary> stages;  // one per pipeline stage
  StageSummary total;
};

/// Runs every scene `repetitions` times and summarises per-image stage times.
BenchReport bench(std::span<const SceneInput> scenes, const PipelineConfig& config,
                  int repetitions);

}  // namespace egoscene
