#include <benchmark/benchmark.h>

#include <random>

#include "drillcoax/circle_fit.hpp"
#include "drillcoax/gmm.hpp"
#include "drillcoax/pipeline.hpp"
#include "drillcoax/simulator.hpp"
#include "drillcoax/sor.hpp"

using namespace drillcoax;

namespace {

// Full-size noisy scan (1000 frames x 1350 samples), built once.
const SimulatedScan& drill_scan() {
  static const SimulatedScan sim = [] {
    DrillSpec spec;
    spec.bend = BendModel{0.25, 70.0, 30.0};
    ScanOptions o;
    o.noise_sigma = 0.003;
    o.seed = 1;
    return scan_drill(spec, ScanMeta{1000, 1350, 150.0, 0.0}, OcclusionModel{}, o);
  }();
  return sim;
}

void BM_Measure(benchmark::State& state) {
  const auto& sim = drill_scan();
  PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(measure(sim.scan, cfg).coaxiality);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(sim.truth.labels.size()));
}
BENCHMARK(BM_Measure)->Unit(benchmark::kMillisecond);

void BM_SegmentScan(benchmark::State& state) {
  const auto& sim = drill_scan();
  PipelineConfig cfg;
  cfg.sor_enabled = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(segment_scan(sim.scan, cfg).cloud.points.size());
}
BENCHMARK(BM_SegmentScan)->Arg(0)->Arg(1)->ArgName("sor")->Unit(benchmark::kMillisecond);

void BM_ClassicalGmm(benchmark::State& state) {
  const auto cloud = unroll(drill_scan().scan);
  for (auto _ : state) benchmark::DoNotOptimize(classical_gmm_segment(cloud, EmOptions{}).point_labels.size());
}
BENCHMARK(BM_ClassicalGmm)->Unit(benchmark::kMillisecond);

void BM_EmFit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> a(145.0, 0.02), b(145.5, 0.02);
  std::vector<double> z(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = i % 3 ? a(rng) : b(rng);
  const auto init = init_gmm(z);
  for (auto _ : state) benchmark::DoNotOptimize(em_fit(z, init, EmOptions{}).log_likelihood);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EmFit)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_Sor(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<Point3> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {u(rng), u(rng), 0.01 * u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(sor_filter(pts, SorOptions{}).removed);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sor)->RangeMultiplier(4)->Range(4096, 262144)->Complexity()->Unit(benchmark::kMillisecond);

void BM_CircleFit(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  std::vector<Point2> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) {
    const double t = u(rng);
    p = {5.0 * std::cos(t), 5.0 * std::sin(t)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_circle(pts).radius);
}
BENCHMARK(BM_CircleFit)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SimulateDrill(benchmark::State& state) {
  DrillSpec spec;
  spec.bend = BendModel{0.25, 70.0, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        scan_drill(spec, ScanMeta{1000, 1350, 150.0, 0.0}, OcclusionModel{}, ScanOptions{}).truth.labels.size());
  }
}
BENCHMARK(BM_SimulateDrill)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
