// Serial reference kernels against their OpenMP counterparts, plus the
// per-stage cost of the whole pipeline on a synthetic scene.

#include <benchmark/benchmark.h>

#include <map>

#include "egoscene/depth.hpp"
#include "egoscene/geometry.hpp"
#include "egoscene/pipeline.hpp"
#include "egoscene/synthscene.hpp"

using namespace egoscene;

namespace {

const SyntheticScene& scene(int regions) {
  static std::map<int, SyntheticScene> cache;
  auto it = cache.find(regions);
  if (it == cache.end()) {
    SceneSpec spec;
    spec.seed = 7;
    spec.n_regions = regions;
    it = cache.emplace(regions, generate(spec)).first;
  }
  return it->second;
}

void BM_MeanFilterReference(benchmark::State& state) {
  const DepthMap& m = scene(20).depth;
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::mean_filter(m, k));
}

void BM_MeanFilter(benchmark::State& state) {
  const DepthMap& m = scene(20).depth;
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mean_filter(m, k));
}

void BM_RegionStatsReference(benchmark::State& state) {
  const DepthMap& m = scene(20).depth;
  const PixelRect full{0, 0, m.width() - 1, m.height() - 1};
  for (auto _ : state) benchmark::DoNotOptimize(reference::region_depth_stats(m, full));
}

void BM_RegionStats(benchmark::State& state) {
  const DepthMap& m = scene(20).depth;
  const PixelRect full{0, 0, m.width() - 1, m.height() - 1};
  for (auto _ : state) benchmark::DoNotOptimize(region_depth_stats(m, full));
}

void BM_CentroidReference(benchmark::State& state) {
  const SyntheticScene& s = scene(20);
  for (auto _ : state)
    for (const Segment& seg : s.segments)
      benchmark::DoNotOptimize(reference::region_centroid(seg.polygon, s.depth));
}

void BM_Centroid(benchmark::State& state) {
  const SyntheticScene& s = scene(20);
  for (auto _ : state)
    for (const Segment& seg : s.segments)
      benchmark::DoNotOptimize(region_centroid(seg.polygon, s.depth));
}

void BM_PipelineStages(benchmark::State& state) {
  const SyntheticScene& s = scene(static_cast<int>(state.range(0)));
  std::array<double, 5> sums{};
  for (auto _ : state) {
    const PipelineResult r = run_pipeline(s.depth, s.segments, PipelineConfig{});
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += r.timing.stage_us[i];
  }
  for (std::size_t i = 0; i < sums.size(); ++i)
    state.counters[std::string(kStageNames[i]) + "_us"] =
        benchmark::Counter(sums[i] / static_cast<double>(state.iterations()));
}

}  // namespace

BENCHMARK(BM_MeanFilterReference)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeanFilter)->Arg(3)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegionStatsReference)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RegionStats)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CentroidReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Centroid)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PipelineStages)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
