#include "egoscene/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "egoscene/image_io.hpp"

namespace egoscene {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

// Report values are rounded so text output does not depend on last-bit libm
// differences between platforms.
double rounded(double v) { return std::round(v * 1e4) / 1e4; }

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

double number_key(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number()) config_error(std::string("config key '") + key + "' must be a number");
  return doc[key].get<double>();
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PipelineConfig PipelineConfig::from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    config_error("malformed config JSON at byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) config_error("config must be a JSON object");
  static const std::vector<std::string> kKeys = {
      "focal_px",     "principal_x", "principal_y", "kernel",         "sentinels",
      "touch_tol_px", "near_z_mm",   "overlap_min", "caption_source", "captions_path"};
  for (const auto& [key, value] : doc.items())
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      config_error("unknown config key '" + key + "'");

  PipelineConfig c;
  c.camera.focal_px = number_key(doc, "focal_px", c.camera.focal_px);
  c.camera.principal_x = number_key(doc, "principal_x", c.camera.principal_x);
  c.camera.principal_y = number_key(doc, "principal_y", c.camera.principal_y);
  c.thresholds.touch_tol = number_key(doc, "touch_tol_px", c.thresholds.touch_tol);
  c.thresholds.near_z = number_key(doc, "near_z_mm", c.thresholds.near_z);
  c.thresholds.overlap_min = number_key(doc, "overlap_min", c.thresholds.overlap_min);
  if (doc.contains("kernel")) {
    if (!doc["kernel"].is_number_integer()) config_error("config key 'kernel' must be an integer");
    c.kernel = doc["kernel"].get<int>();
  }
  if (doc.contains("sentinels")) {
    const json& s = doc["sentinels"];
    if (!s.is_array()) config_error("config key 'sentinels' must be an array");
    std::vector<DepthValue> codes;
    for (const json& v : s) {
      if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 65535)
        config_error("sentinel codes must be integers in [0, 65535]");
      codes.push_back(static_cast<DepthValue>(v.get<int>()));
    }
    c.sentinels = SentinelSet(std::move(codes));
  }
  if (doc.contains("caption_source")) {
    const json& s = doc["caption_source"];
    if (s == "annotations")
      c.caption_source = CaptionSource::kAnnotations;
    else if (s == "external")
      c.caption_source = CaptionSource::kExternal;
    else
      config_error("caption_source must be \"annotations\" or \"external\"");
  }
  if (doc.contains("captions_path")) {
    if (!doc["captions_path"].is_string()) config_error("captions_path must be a string");
    c.captions_path = doc["captions_path"].get<std::string>();
  }
  c.validate();
  return c;
}

void PipelineConfig::validate() const {
  if (kernel < 1 || kernel % 2 == 0)
    config_error("kernel must be a positive odd integer, got " + std::to_string(kernel));
  if (!(camera.focal_px > 0.0)) config_error("focal_px must be positive");
  if (caption_source == CaptionSource::kExternal && !captions_path)
    config_error("caption_source \"external\" needs a captions file");
  thresholds.validate();
}

PipelineResult run_pipeline(const DepthMap& depth, std::span<const Segment> segments,
                            const PipelineConfig& config, const CaptionMap* captions) {
  config.validate();
  config.camera.validate(depth.size());
  const auto run_start = Clock::now();
  PipelineResult result;

  auto t = Clock::now();
  DepthMap filtered = mean_filter(depth, config.kernel);
  filtered.set_sentinels(config.sentinels);
  result.timing.stage_us[0] = micros_since(t);

  t = Clock::now();
  result.regions.reserve(segments.size());
  for (const Segment& seg : segments) {
    RegionResult r;
    r.id = seg.id;
    if (captions) {
      auto it = captions->find(seg.id);
      if (it == captions->end())
        throw Error(ErrorKind::kNotFound, "external captions lack segment " + std::to_string(seg.id));
      r.caption = it->second;
    } else {
      r.caption = seg.caption;
    }
    r.centroid = region_centroid(seg.polygon, filtered);
    r.box = build_box3d(seg, filtered, r.centroid.y_img);
    result.regions.push_back(std::move(r));
  }
  result.timing.stage_us[1] = micros_since(t);

  t = Clock::now();
  for (RegionResult& r : result.regions) {
    r.centroid = locate(r.centroid, config.camera);
    r.direction = direction_of(r.centroid);
  }
  result.timing.stage_us[2] = micros_since(t);

  t = Clock::now();
  std::vector<FieldBox> field_boxes;
  std::vector<Box3D> boxes;
  field_boxes.reserve(result.regions.size());
  boxes.reserve(result.regions.size());
  for (const RegionResult& r : result.regions) {
    field_boxes.push_back({r.box, r.direction.field});
    boxes.push_back(r.box);
  }
  result.adjacency = build_adjacency(field_boxes, config.thresholds);
  if (!boxes.empty()) result.ground_background = detect_ground_background(boxes);
  result.timing.stage_us[3] = micros_since(t);

  t = Clock::now();
  NarrationInput input;
  std::vector<SegmentId> kept_apart;
  if (result.ground_background) {
    input.ground = result.ground_background->ground;
    input.background = result.ground_background->background;
    kept_apart = {*input.ground, *input.background};
  }
  for (const RegionResult& r : result.regions) input.captions[r.id] = r.caption;
  for (std::size_t f = 0; f < 3; ++f) {
    input.members[f] = result.adjacency[f].region_ids();
    input.trails[f] = euler_trails(result.adjacency[f].without(kept_apart));
  }
  result.description = compose_scene(input);
  result.timing.stage_us[4] = micros_since(t);

  result.timing.total_us = micros_since(run_start);
  return result;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CaptionMap parse_captions(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, "malformed captions JSON at byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw Error(ErrorKind::kParse, "captions file must be a JSON object");
  CaptionMap out;
  for (const auto& [key, value] : doc.items()) {
    std::size_t used = 0;
    unsigned long id = 0;
    try {
      id = std::stoul(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty())
      throw Error(ErrorKind::kParse, "captions key '" + key + "' is not a segment id");
    if (!value.is_string())
      throw Error(ErrorKind::kParse, "caption for segment " + key + " is not a string");
    out[static_cast<SegmentId>(id)] = value.get<std::string>();
  }
  return out;
}

PipelineResult run(const std::filesystem::path& depth_path,
                   const std::filesystem::path& annotations_path, const PipelineConfig& config) {
  config.validate();
  const DepthMap depth = load_depth(depth_path, config.sentinels);
  const ParsedAnnotations ann = parse_annotations(read_text_file(annotations_path), depth.size());
  if (config.caption_source == CaptionSource::kExternal) {
    const CaptionMap captions = parse_captions(read_text_file(*config.captions_path));
    return run_pipeline(depth, ann.segments, config, &captions);
  }
  return run_pipeline(depth, ann.segments, config);
}

std::string report_json(const PipelineResult& result) {
  ordered_json doc;
  ordered_json segments = ordered_json::array();
  for (const RegionResult& r : result.regions)
    segments.push_back({{"id", r.id},
                        {"caption", r.caption},
                        {"theta_deg", rounded(r.direction.theta_deg)},
                        {"field", std::string(to_string(r.direction.field))},
                        {"centroid",
                         {{"x_img", rounded(r.centroid.x_img)},
                          {"y_img", rounded(r.centroid.y_img)},
                          {"z", rounded(r.centroid.z)},
                          {"x_w", rounded(r.centroid.x_w)}}},
                        {"box",
                         {{"x1", r.box.x1},
                          {"y1", r.box.y1},
                          {"x2", r.box.x2},
                          {"y2", r.box.y2},
                          {"z_min", rounded(r.box.z_min)},
                          {"z_max", rounded(r.box.z_max)},
                          {"z_mean", rounded(r.box.z_mean)}}}});
  doc["segments"] = segments;
  ordered_json relations = ordered_json::array();
  for (const FieldAdjacency& adj : result.adjacency)
    for (const Relation& rel : adj.relations())
      relations.push_back({{"field", std::string(to_string(adj.field()))},
                           {"subject", rel.subject},
                           {"object", rel.object},
                           {"kind", std::string(to_string(rel.kind))}});
  doc["relations"] = relations;
  if (result.ground_background) {
    doc["ground"] = result.ground_background->ground;
    doc["background"] = result.ground_background->background;
  } else {
    doc["ground"] = nullptr;
    doc["background"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

Prediction to_prediction(const PipelineResult& result) {
  Prediction p;
  for (const RegionResult& r : result.regions) p.regions.push_back({r.id, r.direction.field});
  for (const FieldAdjacency& adj : result.adjacency)
    for (const Relation& rel : adj.relations()) p.relations.push_back(rel);
  if (result.ground_background) {
    p.ground = result.ground_background->ground;
    p.background = result.ground_background->background;
  }
  return p;
}

SceneInput load_scene(const std::filesystem::path& dir, const PipelineConfig& config) {
  std::filesystem::path depth_path = dir / "depth.pgm";
  if (!std::filesystem::exists(depth_path) && std::filesystem::exists(dir / "depth.png"))
    depth_path = dir / "depth.png";
  SceneInput scene;
  scene.name = dir.filename().string();
  scene.depth = load_depth(depth_path, config.sentinels);
  scene.segments =
      parse_annotations(read_text_file(dir / "annotations.json"), scene.depth.size()).segments;
  return scene;
}

BenchReport bench(std::span<const SceneInput> scenes, const PipelineConfig& config,
                  int repetitions) {
  if (scenes.empty()) throw Error(ErrorKind::kInvalidArgument, "bench needs at least one scene");
  if (repetitions < 1)
    throw Error(ErrorKind::kInvalidArgument,
                "bench repetitions must be >= 1, got " + std::to_string(repetitions));
  std::array<std::vector<double>, kStageNames.size()> samples;
  std::vector<double> totals;
  for (int rep = 0; rep < repetitions; ++rep)
    for (const SceneInput& s : scenes) {
      const PipelineResult r = run_pipeline(s.depth, s.segments, config);
      for (std::size_t i = 0; i < kStageNames.size(); ++i) samples[i].push_back(r.timing.stage_us[i]);
      totals.push_back(r.timing.total_us);
    }
  BenchReport rep;
  rep.scenes = scenes.size();
  rep.repetitions = repetitions;
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    rep.stages.push_back({kStageNames[i], median(samples[i]), percentile(samples[i], 0.95)});
  rep.total = {"total", median(totals), percentile(totals, 0.95)};
  return rep;
}

}  // namespace egoscene
