#include <benchmark/benchmark.h>

#include "bundle_lab/classify.hpp"
#include "bundle_lab/frames.hpp"
#include "bundle_lab/geometry.hpp"
#include "bundle_lab/monodromy.hpp"
#include "bundle_lab/operators.hpp"

using namespace bundle_lab;

namespace {

const FunctionSpec kComposite =
    FunctionSpec::compose(FunctionSpec::polynomial({0.0, 1.0, 0.0, 2.0}), FunctionSpec::blaschke(BlaschkeProduct({0.0, 0.4})));

void BM_BlaschkeTaylor(benchmark::State& state) {
  const auto spec = FunctionSpec::blaschke(BlaschkeProduct({0.0, 0.5, cplx(-0.3, 0.2)}, 0.4));
  const auto K = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(taylor(spec, K));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BlaschkeTaylor)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_SeriesMultiply(benchmark::State& state) {
  const auto K = static_cast<std::size_t>(state.range(0));
  const auto a = PowerSeries::geom(cplx(0.3, 0.4), K);
  const auto b = PowerSeries::geom(cplx(-0.5, 0.1), K);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SeriesMultiply)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_BuildFrame(benchmark::State& state) {
  const auto w = WeightSequence::bergman(1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_frame(BlaschkeProduct({0.0, 0.5}), w, n, 5 * n));
}
BENCHMARK(BM_BuildFrame)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RieszBounds(benchmark::State& state) {
  const auto f = build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::bergman(1.0), 100, 512);
  for (auto _ : state) benchmark::DoNotOptimize(riesz_bounds_at(f));
}
BENCHMARK(BM_RieszBounds)->Unit(benchmark::kMillisecond);

void BM_LeftInverse(benchmark::State& state) {
  const auto w = WeightSequence::bergman(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(left_inverse_check(BlaschkeProduct({0.0, 0.5}), w, 256));
}
BENCHMARK(BM_LeftInverse)->Unit(benchmark::kMillisecond);

void BM_ColumnNormProfile(benchmark::State& state) {
  const auto w = WeightSequence::parse("reciprocal:nln");
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(column_norm_profile(0.5, w, n));
}
BENCHMARK(BM_ColumnNormProfile)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_WindingIndex(benchmark::State& state) {
  const WindingCounter counter(FunctionSpec::polynomial({2.0, 1.0, 1.0}));
  for (auto _ : state) benchmark::DoNotOptimize(counter.evaluate(cplx(1.66, 0.0)));
}
BENCHMARK(BM_WindingIndex);

void BM_IndexMap(benchmark::State& state) {
  const auto h = FunctionSpec::polynomial({2.0, 1.0, 1.0});
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(index_map(h, {-1.0, 5.0, -3.0, 3.0}, res));
}
BENCHMARK(BM_IndexMap)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(decompose(kComposite));
}
BENCHMARK(BM_Decompose)->Unit(benchmark::kMillisecond);

void BM_DouglasIntertwiner(benchmark::State& state) {
  DouglasOptions o;
  o.K = static_cast<std::size_t>(state.range(0));
  o.n_max = o.K / 5;
  const auto w = WeightSequence::bergman(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(douglas_intertwiner(BlaschkeProduct({0.0, 0.5}), w, o));
}
BENCHMARK(BM_DouglasIntertwiner)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_MoebiusMatch(benchmark::State& state) {
  const auto g = FunctionSpec::polynomial({0.2, 1.0, 0.3, 0.4});
  const auto gp = FunctionSpec::compose(g, FunctionSpec::blaschke(BlaschkeProduct({cplx(0.25, -0.1)}, 1.3)));
  for (auto _ : state) benchmark::DoNotOptimize(moebius_match(g, gp));
}
BENCHMARK(BM_MoebiusMatch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
