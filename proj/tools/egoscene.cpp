// egoscene: egocentric scene descriptions from a depth map and segment
// annotations.
//
//   egoscene describe <depth> <annotations> [--config c.json] [--captions caps.json]
//                     [--report-json out.json|-] [--quiet] [--timing]
//   egoscene bench <dir> [--reps N] [--config c.json]
//   egoscene synth --seed N --regions K --out dir [--noise p] [--ramps p]
//
// Exit codes: 0 ok, 2 I/O, 3 data, 4 config.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "egoscene/pipeline.hpp"
#include "egoscene/synthscene.hpp"

namespace fs = std::filesystem;
using namespace egoscene;

namespace {

constexpr int kExitIo = 2;
constexpr int kExitData = 3;
constexpr int kExitConfig = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return kExitIo;
    case ErrorKind::kConfig: return kExitConfig;
    default: return kExitData;
  }
}

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    // An unreadable config is a configuration problem, not a data one.
    throw Error(ErrorKind::kConfig, e.what());
  }
  return PipelineConfig::from_json(text);
}

void print_timing(std::ostream& out, const TimingReport& t) {
  out << std::fixed << std::setprecision(1);
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    out << std::setw(14) << std::left << kStageNames[i] << std::right << std::setw(12)
        << t.stage_us[i] << " us\n";
  out << std::setw(14) << std::left << "total" << std::right << std::setw(12) << t.total_us
      << " us\n";
}

int cmd_describe(const std::string& depth, const std::string& annotations,
                 const std::string& config_path, const std::string& captions,
                 const std::string& report_path, bool quiet, bool timing) {
  PipelineConfig config = load_config(config_path);
  if (!captions.empty()) {
    config.caption_source = CaptionSource::kExternal;
    config.captions_path = captions;
  }
  const PipelineResult result = run(depth, annotations, config);
  const bool json_to_stdout = report_path == "-";
  if (!quiet && !json_to_stdout) std::cout << result.description.full_text;
  if (!report_path.empty()) {
    const std::string report = report_json(result);
    if (json_to_stdout) {
      std::cout << report;
    } else {
      std::ofstream out(report_path, std::ios::binary);
      out << report;
      if (!out) throw Error(ErrorKind::kIo, "cannot write '" + report_path + "'");
    }
  }
  if (timing) print_timing(std::cerr, result.timing);
  return 0;
}

bool is_scene_dir(const fs::path& dir) {
  return fs::exists(dir / "annotations.json") &&
         (fs::exists(dir / "depth.pgm") || fs::exists(dir / "depth.png"));
}

int cmd_bench(const std::string& dir, int reps, const std::string& config_path) {
  const PipelineConfig config = load_config(config_path);
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kIo, "'" + dir + "' is not a directory");
  std::vector<fs::path> scene_dirs;
  if (is_scene_dir(dir)) {
    scene_dirs.push_back(dir);
  } else {
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_directory() && is_scene_dir(entry.path())) scene_dirs.push_back(entry.path());
    std::sort(scene_dirs.begin(), scene_dirs.end());
  }
  std::vector<SceneInput> scenes;
  for (const fs::path& p : scene_dirs) scenes.push_back(load_scene(p, config));
  const BenchReport rep = bench(scenes, config, reps);

  std::cout << "scenes " << rep.scenes << ", repetitions " << rep.repetitions
            << " (per image, microseconds)\n";
  std::cout << std::left << std::setw(14) << "stage" << std::right << std::setw(12) << "median"
            << std::setw(12) << "p95" << "\n";
  std::cout << std::fixed << std::setprecision(1);
  auto row = [](const StageSummary& s) {
    std::cout << std::left << std::setw(14) << s.stage << std::right << std::setw(12)
              << s.median_us << std::setw(12) << s.p95_us << "\n";
  };
  for (const StageSummary& s : rep.stages) row(s);
  row(rep.total);
  return 0;
}

int cmd_synth(std::uint64_t seed, int regions, const std::string& out, double noise,
              double ramps) {
  SceneSpec spec;
  spec.seed = seed;
  spec.n_regions = regions;
  spec.noise = noise;
  spec.ramp_probability = ramps;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  write_scene(out, generate(spec));
  std::cout << "wrote " << regions << " regions to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Egocentric scene descriptions from RGB-D segments"};
  app.require_subcommand(1);

  std::string depth, annotations, config_path, captions, report_path;
  bool quiet = false, timing = false;
  auto* describe = app.add_subcommand("describe", "Describe one depth image and its segments");
  describe->add_option("depth", depth, "16-bit depth image (PNG or PGM), millimetres")->required();
  describe->add_option("annotations", annotations, "LabelMe-style annotation JSON")->required();
  describe->add_option("--config", config_path, "Pipeline configuration JSON");
  describe->add_option("--captions", captions, "External captions JSON (segment id -> phrase)");
  describe->add_option("--report-json", report_path, "Write the JSON report here ('-' = stdout)");
  describe->add_flag("--quiet", quiet, "Do not print the description");
  describe->add_flag("--timing", timing, "Print per-stage timing to stderr");

  std::string bench_dir;
  int reps = 10;
  auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline over a set of scenes");
  bench_cmd->add_option("dir", bench_dir, "Scene directory or directory of scenes")->required();
  bench_cmd->add_option("--reps", reps, "Repetitions per scene");
  bench_cmd->add_option("--config", config_path, "Pipeline configuration JSON");

  std::uint64_t seed = 1;
  int regions = 5;
  std::string out_dir;
  double noise = 0.02, ramps = 0.0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene with ground truth");
  synth->add_option("--seed", seed, "Generator seed")->required();
  synth->add_option("--regions", regions, "Number of regions")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--noise", noise, "Sentinel noise probability");
  synth->add_option("--ramps", ramps, "Probability of a depth ramp per region");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*describe)
      return cmd_describe(depth, annotations, config_path, captions, report_path, quiet, timing);
    if (*bench_cmd) return cmd_bench(bench_dir, reps, config_path);
    if (*synth) return cmd_synth(seed, regions, out_dir, noise, ramps);
  } catch (const Error& e) {
    std::cerr << "egoscene: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "egoscene: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
