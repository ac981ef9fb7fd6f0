#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

#include "grushin/spectral.hpp"

using namespace grushin;

namespace {

GridPtr bench_grid(int n) {
  GridParams p;
  p.dims = {1, 1};
  p.np_points = n;
  p.npp_points = n;
  p.xpp_period = 2 * std::acos(-1.0);
  p.hermite_cutoff = (n / 3) | 1;
  p.xp_halfwidth = std::sqrt(2.0 * p.hermite_cutoff + 1) + 6.5;
  return make_grid(p);
}

void BM_synthesize_fast(benchmark::State& st) {
  const auto g = bench_grid(static_cast<int>(st.range(0)));
  const auto c = random_band_limited(g, 1);
  omp_set_num_threads(static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(synthesize(c));
}

void BM_synthesize_reference(benchmark::State& st) {
  const auto g = bench_grid(static_cast<int>(st.range(0)));
  const auto c = random_band_limited(g, 1);
  for (auto _ : st) benchmark::DoNotOptimize(reference::synthesize(c));
}

void BM_analyze_fast(benchmark::State& st) {
  const auto g = bench_grid(static_cast<int>(st.range(0)));
  const auto f = synthesize(random_band_limited(g, 2));
  omp_set_num_threads(static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(analyze(f));
}

void BM_analyze_reference(benchmark::State& st) {
  const auto g = bench_grid(static_cast<int>(st.range(0)));
  const auto f = synthesize(random_band_limited(g, 2));
  for (auto _ : st) benchmark::DoNotOptimize(reference::analyze(f));
}

void BM_kernel_column(benchmark::State& st) {
  const auto g = bench_grid(static_cast<int>(st.range(0)));
  omp_set_num_threads(static_cast<int>(st.range(1)));
  const Point y{{0.5}, {0.0}};
  const auto F = bump(1.5, 5.5);
  for (auto _ : st) benchmark::DoNotOptimize(kernel_column(F, y, g));
}

void fast_args(benchmark::internal::Benchmark* b) {
  const int hw = omp_get_num_procs();
  for (int n : {64, 128, 256})
    for (int t = 1; t <= hw; t *= 2) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_synthesize_fast)->Apply(fast_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize_reference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_analyze_fast)->Apply(fast_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_analyze_reference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_column)->Apply(fast_args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
