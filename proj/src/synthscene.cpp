#include "egoscene/synthscene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <json.hpp>
#include <numbers>
#include <set>
#include <tuple>

#include "egoscene/image_io.hpp"

namespace egoscene {

namespace {

using nlohmann::ordered_json;

constexpr std::array<const char*, 8> kAdjectives = {
    "a red", "a wooden", "a tall", "a small", "a dark", "a white", "an old", "a striped"};
constexpr std::array<const char*, 16> kNouns = {
    "curtain", "chair",  "table", "lamp",   "speaker", "box",   "stage riser", "banner",
    "mirror",  "ladder", "crate", "screen", "drum",    "bench", "cabinet",     "plant"};

constexpr DepthValue kNoiseLow = 0;
constexpr DepthValue kNoiseHigh = 4000;
constexpr double kMaxPaintedDepth = 3950.0;
constexpr int kImageMargin = 2;

struct Slab {
  double x_w, y_w, z, width, height;
  double z_near, z_far;
  PixelRect rect;
};

std::optional<Slab> place_slab(const SceneSpec& spec, SceneRng& rng) {
  const CameraModel& cam = spec.camera;
  Slab s{};
  s.z = rng.uniform(spec.z_min, spec.z_max);
  s.width = rng.uniform(spec.size_min, spec.size_max);
  s.height = rng.uniform(spec.size_min, spec.size_max);
  // Keep the projected slab fully inside the image.
  const double x_lo = std::max(spec.x_min, (kImageMargin - cam.principal_x) * s.z / cam.focal_px +
                                               s.width / 2);
  const double x_hi = std::min(
      spec.x_max,
      (spec.image.width - 1 - kImageMargin - cam.principal_x) * s.z / cam.focal_px - s.width / 2);
  const double y_lo = std::max(spec.y_min, (kImageMargin - cam.principal_y) * s.z / cam.focal_px +
                                               s.height / 2);
  const double y_hi = std::min(
      spec.y_max,
      (spec.image.height - 1 - kImageMargin - cam.principal_y) * s.z / cam.focal_px - s.height / 2);
  const double u_x = rng.uniform();
  const double u_y = rng.uniform();
  const double u_ramp = rng.uniform();
  const double u_slope = rng.uniform();
  if (x_lo > x_hi || y_lo > y_hi) return std::nullopt;
  s.x_w = x_lo + (x_hi - x_lo) * u_x;
  s.y_w = y_lo + (y_hi - y_lo) * u_y;

  s.z_near = s.z_far = s.z;
  if (u_ramp < spec.ramp_probability) {
    const double dz = std::min(s.z * (0.05 + 0.2 * u_slope), kMaxPaintedDepth - s.z);
    s.z_near = s.z - dz;
    s.z_far = s.z + dz;
  }

  const double f = cam.focal_px;
  s.rect.x1 = static_cast<int>(std::ceil(f * (s.x_w - s.width / 2) / s.z + cam.principal_x));
  s.rect.x2 = static_cast<int>(std::floor(f * (s.x_w + s.width / 2) / s.z + cam.principal_x));
  s.rect.y1 = static_cast<int>(std::ceil(f * (s.y_w - s.height / 2) / s.z + cam.principal_y));
  s.rect.y2 = static_cast<int>(std::floor(f * (s.y_w + s.height / 2) / s.z + cam.principal_y));
  if (!s.rect.valid() || !s.rect.within(spec.image)) return std::nullopt;
  return s;
}

DepthValue painted_depth(const Slab& s, int x) {
  if (s.z_near == s.z_far) return static_cast<DepthValue>(std::lround(s.z));
  const double t = static_cast<double>(x - s.rect.x1) / (s.rect.x2 - s.rect.x1);
  return static_cast<DepthValue>(std::lround(s.z_near + (s.z_far - s.z_near) * t));
}

double world_theta_deg(double x_w, double z) {
  // Straight from the world position, independent of the pipeline's path.
  if (x_w == 0.0) return 90.0;
  return std::atan(z / x_w) * 180.0 / std::numbers::pi;
}

DirectionField field_from_theta(double theta) {
  if (theta >= 0.0 && theta <= 75.0) return DirectionField::kRight;
  if (theta < 0.0 && theta >= -75.0) return DirectionField::kLeft;
  return DirectionField::kFront;
}

std::vector<std::string> pick_captions(int n, SceneRng& rng) {
  std::vector<std::string> pool;
  for (const char* a : kAdjectives)
    for (const char* noun : kNouns) pool.push_back(std::string(a) + " " + noun);
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = rng.below(pool.size());
    out.push_back(pool[k]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

std::string annotations_document(const std::vector<Segment>& segments, ImageSize image) {
  ordered_json doc;
  doc["version"] = "5.0.1";
  doc["flags"] = ordered_json::object();
  ordered_json shapes = ordered_json::array();
  for (const Segment& s : segments) {
    ordered_json pts = ordered_json::array();
    for (const Point2d& p : s.polygon)
      pts.push_back({static_cast<int>(p.x), static_cast<int>(p.y)});
    shapes.push_back({{"label", s.caption},
                      {"points", pts},
                      {"group_id", nullptr},
                      {"shape_type", "polygon"},
                      {"flags", ordered_json::object()}});
  }
  doc["shapes"] = shapes;
  doc["imagePath"] = "rgb.png";
  doc["imageData"] = nullptr;
  doc["imageHeight"] = image.height;
  doc["imageWidth"] = image.width;
  return doc.dump(2) + "\n";
}

}  // namespace

SceneRng::SceneRng(std::uint64_t seed) noexcept : state_(seed) {}

std::uint64_t SceneRng::next() noexcept {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SceneRng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SceneRng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

std::uint64_t SceneRng::below(std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
}

void SceneSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidArgument, what); };
  if (n_regions < 0) fail("n_regions must be non-negative");
  if (n_regions > static_cast<int>(kAdjectives.size() * kNouns.size()))
    fail("n_regions exceeds the caption vocabulary");
  // A zero-width x or y range pins the slab centres, which tests rely on.
  if (!(x_min <= x_max) || !(y_min <= y_max) || !(z_min < z_max) || !(size_min < size_max))
    fail("scene bounds must be ordered and the depth and size ranges non-degenerate");
  if (!(z_min > 0.0) || z_max > kMaxPaintedDepth) fail("depth range must lie in (0, 3950] mm");
  if (!(noise >= 0.0 && noise < 1.0)) fail("noise must lie in [0, 1)");
  if (!(ramp_probability >= 0.0 && ramp_probability <= 1.0))
    fail("ramp_probability must lie in [0, 1]");
  if (max_attempts < 1) fail("max_attempts must be positive");
  camera.validate(image);
  thresholds.validate();
}

SyntheticScene generate(const SceneSpec& spec) {
  spec.validate();
  SceneRng rng(spec.seed);
  const int w = spec.image.width;
  const int h = spec.image.height;

  auto sample = [&]() -> std::optional<Slab> {
    for (int tries = 0; tries < 50; ++tries)
      if (auto s = place_slab(spec, rng)) return s;
    return std::nullopt;
  };
  auto render_mask = [&](const std::vector<Slab>& slabs) {
    SegmentMask m(w, h);
    std::vector<std::size_t> order(slabs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Painter's order: far slabs first.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return slabs[a].z > slabs[b].z; });
    for (std::size_t i : order) {
      const PixelRect& r = slabs[i].rect;
      for (int y = r.y1; y <= r.y2; ++y)
        for (int x = r.x1; x <= r.x2; ++x) m.at(x, y) = static_cast<std::uint16_t>(i);
    }
    return m;
  };

  std::vector<Slab> slabs;
  for (int i = 0; i < spec.n_regions; ++i) {
    auto s = sample();
    if (!s)
      throw Error(ErrorKind::kGeneration, "slab size range does not fit the image at any depth");
    slabs.push_back(*s);
  }
  // Resample hidden slabs until every region shows enough pixels.
  SegmentMask mask(w, h);
  bool placed = false;
  for (int attempt = 0; attempt < spec.max_attempts && !placed; ++attempt) {
    mask = render_mask(slabs);
    std::vector<int> visible(slabs.size(), 0);
    for (std::uint16_t label : mask.labels)
      if (label != SegmentMask::kBackground) ++visible[label];
    placed = true;
    for (std::size_t i = 0; i < slabs.size(); ++i) {
      if (visible[i] >= spec.min_visible_pixels) continue;
      placed = false;
      if (auto s = sample()) slabs[i] = *s;
    }
  }
  if (!placed)
    throw Error(ErrorKind::kGeneration, "could not place " + std::to_string(spec.n_regions) +
                                            " visible regions in " +
                                            std::to_string(spec.max_attempts) + " attempts");

  SyntheticScene scene;
  scene.mask = std::move(mask);
  scene.depth = DepthMap(w, h, DepthValue{0});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::uint16_t label = scene.mask.at(x, y);
      if (label != SegmentMask::kBackground) scene.depth.at(x, y) = painted_depth(slabs[label], x);
    }
  if (spec.noise > 0.0)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (rng.uniform() < spec.noise)
          scene.depth.at(x, y) = rng.uniform() < 0.5 ? kNoiseLow : kNoiseHigh;

  const std::vector<std::string> captions = pick_captions(spec.n_regions, rng);
  std::vector<Box3D> boxes;
  for (std::size_t i = 0; i < slabs.size(); ++i) {
    const Slab& s = slabs[i];
    Segment seg;
    seg.id = static_cast<SegmentId>(i);
    seg.caption = captions[i];
    seg.polygon = {{double(s.rect.x1), double(s.rect.y1)},
                   {double(s.rect.x2), double(s.rect.y1)},
                   {double(s.rect.x2), double(s.rect.y2)},
                   {double(s.rect.x1), double(s.rect.y2)}};
    seg.bbox = s.rect;
    scene.segments.push_back(seg);

    TruthRegion t;
    t.id = seg.id;
    t.caption = seg.caption;
    t.x_w = s.x_w;
    t.y_w = s.y_w;
    t.z = s.z;
    t.z_near = s.z_near;
    t.z_far = s.z_far;
    t.theta_deg = world_theta_deg(s.x_w, s.z);
    t.field = field_from_theta(t.theta_deg);
    t.rect = s.rect;
    scene.truth.regions.push_back(t);

    Box3D b;
    b.id = seg.id;
    b.x1 = s.rect.x1;
    b.y1 = s.rect.y1;
    b.x2 = s.rect.x2;
    b.y2 = s.rect.y2;
    b.z_min = s.z_near;
    b.z_max = s.z_far;
    b.z_mean = s.z;
    b.centroid_y = 0.5 * (s.rect.y1 + s.rect.y2);
    boxes.push_back(b);
  }
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      if (scene.truth.regions[i].field != scene.truth.regions[j].field) continue;
      if (auto k = relate(boxes[i], boxes[j], spec.thresholds))
        scene.truth.relations.push_back({*k, boxes[i].id, boxes[j].id});
    }
  if (!boxes.empty()) {
    const GroundBackground gb = detect_ground_background(boxes);
    scene.truth.ground = gb.ground;
    scene.truth.background = gb.background;
  }
  scene.annotations_json = annotations_document(scene.segments, spec.image);
  return scene;
}

std::string truth_to_json(const GroundTruth& truth) {
  ordered_json doc;
  ordered_json regions = ordered_json::array();
  for (const TruthRegion& r : truth.regions)
    regions.push_back({{"id", r.id},
                       {"caption", r.caption},
                       {"x_w", r.x_w},
                       {"y_w", r.y_w},
                       {"z", r.z},
                       {"z_near", r.z_near},
                       {"z_far", r.z_far},
                       {"theta_deg", r.theta_deg},
                       {"field", std::string(to_string(r.field))},
                       {"rect", {r.rect.x1, r.rect.y1, r.rect.x2, r.rect.y2}}});
  doc["regions"] = regions;
  ordered_json rels = ordered_json::array();
  for (const Relation& r : truth.relations)
    rels.push_back({{"subject", r.subject}, {"object", r.object},
                    {"kind", std::string(to_string(r.kind))}});
  doc["relations"] = rels;
  doc["ground"] = truth.ground ? ordered_json(*truth.ground) : ordered_json(nullptr);
  doc["background"] = truth.background ? ordered_json(*truth.background) : ordered_json(nullptr);
  return doc.dump(2) + "\n";
}

void write_scene(const std::filesystem::path& dir, const SyntheticScene& scene) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create '" + dir.string() + "': " + ec.message());
  save_depth(dir / "depth.pgm", scene.depth);
  write_pgm16(dir / "mask.pgm", {scene.mask.width, scene.mask.height, scene.mask.labels});
  auto write_text = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::kIo, "cannot write '" + p.string() + "'");
  };
  write_text(dir / "annotations.json", scene.annotations_json);
  write_text(dir / "truth.json", truth_to_json(scene.truth));
}

AccuracyReport evaluate(const Prediction& pred, const GroundTruth& truth,
                        double boundary_margin_deg) {
  std::map<SegmentId, DirectionField> predicted;
  for (const auto& r : pred.regions) predicted[r.id] = r.field;
  std::set<SegmentId> truth_ids;
  for (const auto& r : truth.regions) truth_ids.insert(r.id);
  std::set<SegmentId> pred_ids;
  for (const auto& [id, f] : predicted) pred_ids.insert(id);
  if (pred_ids != truth_ids || predicted.size() != pred.regions.size())
    throw Error(ErrorKind::kConsistency, "prediction and ground truth cover different region ids");

  AccuracyReport rep;
  for (const TruthRegion& t : truth.regions) {
    const bool hit = predicted[t.id] == t.field;
    ++rep.regions;
    rep.direction_hits += hit;
    const double margin = std::min({std::abs(t.theta_deg), std::abs(t.theta_deg - 75.0),
                                    std::abs(t.theta_deg + 75.0)});
    if (margin >= boundary_margin_deg) {
      ++rep.clear_regions;
      rep.clear_hits += hit;
    }
  }
  if (rep.regions) rep.direction_accuracy = double(rep.direction_hits) / double(rep.regions);
  if (rep.clear_regions)
    rep.clear_direction_accuracy = double(rep.clear_hits) / double(rep.clear_regions);

  // Compare as (lower id, higher id, kind read from the lower id).
  auto canonical = [](const std::vector<Relation>& rels) {
    std::set<std::tuple<SegmentId, SegmentId, RelationKind>> out;
    for (const Relation& r : rels) {
      if (r.subject < r.object)
        out.emplace(r.subject, r.object, r.kind);
      else
        out.emplace(r.object, r.subject, inverse(r.kind));
    }
    return out;
  };
  const auto p = canonical(pred.relations);
  const auto t = canonical(truth.relations);
  std::size_t common = 0;
  for (const auto& triple : p) common += t.count(triple);
  if (!p.empty()) rep.relation_precision = double(common) / double(p.size());
  if (!t.empty()) rep.relation_recall = double(common) / double(t.size());
  rep.ground_correct = pred.ground == truth.ground;
  rep.background_correct = pred.background == truth.background;
  return rep;
}

}  // namespace egoscene
