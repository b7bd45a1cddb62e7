#include <benchmark/benchmark.h>

#include "nlperim/perimeter.h"

using namespace nlperim;

namespace {

void BM_PerNuFractionalSquare(benchmark::State& st) {
  const auto g = covariogram_exact(Shape{make_box(2, {0, 0, 0}, {1, 1, 0})});
  const auto m = MeasureSpec::fractional(2, st.range(0) / 100.0);
  for (auto _ : st) benchmark::DoNotOptimize(per_nu(g, m));
}
BENCHMARK(BM_PerNuFractionalSquare)->Arg(10)->Arg(50)->Arg(90)->Arg(99)->Unit(benchmark::kMillisecond);

void BM_PerNuGaussianDisk(benchmark::State& st) {
  const auto g = covariogram_exact(Shape{make_ball(2, 1.0)});
  KernelSpec J;
  J.name = KernelName::gaussian;
  const auto m = MeasureSpec::kernel(2, J);
  for (auto _ : st) benchmark::DoNotOptimize(per_nu(g, m));
}
BENCHMARK(BM_PerNuGaussianDisk)->Unit(benchmark::kMillisecond);

void BM_PerNuGridDisk(benchmark::State& st) {
  const auto g = covariogram_grid(rasterize(Shape{make_ball(2, 1.0)}, 2.0 / st.range(0)));
  const auto m = MeasureSpec::stable(2, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(per_nu(g, m));
}
BENCHMARK(BM_PerNuGridDisk)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_MonteCarloInterval(benchmark::State& st) {
  const Shape e{make_interval_union({{0, 1}})};
  OracleOptions o;
  o.samples = static_cast<std::uint64_t>(st.range(0));
  o.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(per_nu_mc_oracle(e, MeasureSpec::fractional(1, 0.5), o));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_MonteCarloInterval)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
