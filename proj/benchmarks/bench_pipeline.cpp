#include <cmath>

#include <benchmark/benchmark.h>

#include "acce/pipeline.hpp"

namespace {

// smooth bluish gradient with a few ripples
acce::RgbImage scene(int w, int h) {
  acce::RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = double(x) / w, v = double(y) / h;
      const double ripple = 0.05 * std::sin(20.0 * u) * std::cos(13.0 * v);
      img.r()(x, y) = 0.15 + 0.1 * u + ripple;
      img.g()(x, y) = 0.45 + 0.2 * v + ripple;
      img.b()(x, y) = 0.55 + 0.15 * (1.0 - v) - ripple;
    }
  }
  return img;
}

void BM_Enhance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const acce::RgbImage img = scene(n, n);
  const acce::PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(acce::enhance(img, cfg));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Enhance)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SolverStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const acce::PipelineConfig cfg;
  const acce::GuideImage guide =
      acce::build_guide(acce::bilateral_filter(scene(n, n), cfg.filters), cfg.lambda, cfg.spread);
  const acce::SolverState start = acce::make_state(guide, guide, cfg.solver);
  for (auto _ : state) benchmark::DoNotOptimize(acce::step(start, cfg.solver));
}
BENCHMARK(BM_SolverStep)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
