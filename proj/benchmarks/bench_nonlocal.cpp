#include <random>

#include <benchmark/benchmark.h>

#include "acce/nonlocal.hpp"

namespace {

acce::Plane noise(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  acce::Plane p(n, n);
  for (double& v : p.samples()) v = u(rng);
  return p;
}

void BM_NaiveGlobal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const acce::Plane i = noise(n, 1), c = noise(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(acce::naive_sums(i, c, acce::KernelSpec{}, acce::Scope::global));
  }
  state.SetComplexityN(static_cast<long>(n) * n);
}
BENCHMARK(BM_NaiveGlobal)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_NaiveWindow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const acce::Plane i = noise(n, 1), c = noise(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(acce::naive_sums(i, c, acce::KernelSpec{}, acce::Scope::window));
  }
}
BENCHMARK(BM_NaiveWindow)->RangeMultiplier(2)->Range(16, 512)->Unit(benchmark::kMillisecond);

void BM_Pyramid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const acce::Plane i = noise(n, 1), c = noise(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(acce::pyramid_sums(i, c, acce::KernelSpec{}));
  }
  state.SetComplexityN(static_cast<long>(n) * n);
}
BENCHMARK(BM_Pyramid)->RangeMultiplier(2)->Range(16, 1024)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNLogN);

}  // namespace
