#include <benchmark/benchmark.h>

#include "nlperim/covariogram.h"

using namespace nlperim;

namespace {

VoxelSet disk_voxels(int cells) { return rasterize(Shape{make_ball(2, 1.0)}, 2.0 / cells); }

void BM_AutocorrelationFFT(benchmark::State& st) {
  const auto v = disk_voxels(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(covariogram_grid(v));
}
BENCHMARK(BM_AutocorrelationFFT)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond);

void BM_AutocorrelationDirect(benchmark::State& st) {
  const auto v = disk_voxels(static_cast<int>(st.range(0)));
  GridOptions o;
  o.method = AutocorrelationMethod::direct;
  for (auto _ : st) benchmark::DoNotOptimize(covariogram_grid(v, o));
}
BENCHMARK(BM_AutocorrelationDirect)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMillisecond);

void BM_ExactDiskIncrement(benchmark::State& st) {
  const auto g = covariogram_exact(Shape{make_ball(2, 1.0)});
  double y = 0.0;
  for (auto _ : st) {
    y += 1e-7;
    benchmark::DoNotOptimize(g.increment({y, 0.5 * y, 0}));
  }
}
BENCHMARK(BM_ExactDiskIncrement);

}  // namespace
