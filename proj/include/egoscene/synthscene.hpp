#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "egoscene/annotations.hpp"
#include "egoscene/depth.hpp"
#include "egoscene/geometry.hpp"
#include "egoscene/relations.hpp"

namespace egoscene {

/// Reproducible across platforms: fixed xorshift-style generator and our own
/// integer-to-real mapping instead of <random> distributions.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) noexcept;
  std::uint64_t next() noexcept;
  double uniform() noexcept;                       // [0, 1)
  double uniform(double lo, double hi) noexcept;   // [lo, hi)
  std::uint64_t below(std::uint64_t n) noexcept;   // [0, n)

 private:
  std::uint64_t state_;
};

struct SceneSpec {
  std::uint64_t seed = 1;
  int n_regions = 5;
  ImageSize image{640, 480};
  CameraModel camera;
  // World ranges in mm for region centres (x, y) and depth (z).
  double x_min = -2000.0, x_max = 2000.0;
  double y_min = -900.0, y_max = 900.0;
  double z_min = 900.0, z_max = 3600.0;
  // Slab sides in mm.
  double size_min = 150.0, size_max = 700.0;
  double noise = 0.02;            // probability of a sentinel pixel
  double ramp_probability = 0.0;  // chance a slab gets a horizontal depth ramp
  int min_visible_pixels = 100;
  int max_attempts = 200;
  RelationThresholds thresholds;

  void validate() const;
};

struct TruthRegion {
  SegmentId id = 0;
  std::string caption;
  double x_w = 0.0, y_w = 0.0, z = 0.0;  // slab centre
  double z_near = 0.0, z_far = 0.0;
  double theta_deg = 90.0;
  DirectionField field = DirectionField::kFront;
  PixelRect rect;  // projected slab, inclusive pixels
};

struct GroundTruth {
  std::vector<TruthRegion> regions;
  std::vector<Relation> relations;  // subject has the lower id
  std::optional<SegmentId> ground;
  std::optional<SegmentId> background;
};

struct SyntheticScene {
  DepthMap depth;
  SegmentMask mask;
  std::vector<Segment> segments;
  std::string annotations_json;
  GroundTruth truth;
};

/// Renders constant-depth (optionally ramped) slabs facing the camera, far to
/// near, then injects sentinel noise. Truth directions come straight from
/// world coordinates. Throws kGeneration when the regions cannot all be
/// placed visibly within max_attempts.
SyntheticScene generate(const SceneSpec& spec);

/// depth.pgm, mask.pgm, annotations.json and truth.json under `dir`.
void write_scene(const std::filesystem::path& dir, const SyntheticScene& scene);

std::string truth_to_json(const GroundTruth& truth);

struct Prediction {
  struct Region {
    SegmentId id = 0;
    DirectionField field = DirectionField::kFront;
  };
  std::vector<Region> regions;
  std::vector<Relation> relations;
  std::optional<SegmentId> ground;
  std::optional<SegmentId> background;
};

struct AccuracyReport {
  std::size_t regions = 0;
  std::size_t direction_hits = 0;
  double direction_accuracy = 1.0;
  // Same, counting only regions at least boundary_margin_deg from 0 and +-75.
  std::size_t clear_regions = 0;
  std::size_t clear_hits = 0;
  double clear_direction_accuracy = 1.0;
  double relation_precision = 1.0;
  double relation_recall = 1.0;
  bool ground_correct = true;
  bool background_correct = true;
};

/// Throws kConsistency when the two sides disagree on the set of region ids.
AccuracyReport evaluate(const Prediction& pred, const GroundTruth& truth,
                        double boundary_margin_deg = 1.0);

}  // namespace egoscene
