#include <benchmark/benchmark.h>

#include "cohercause/coherence.hpp"
#include "cohercause/inference.hpp"
#include "cohercause/null_distribution.hpp"
#include "cohercause/simulate.hpp"

namespace cc = cohercause;

namespace {

const cc::SequencePair& barnett_data() {
  static const auto data = cc::gen_barnett(cc::BarnettModelSpec{}, 1000, 42);
  return data;
}

void BM_PartialCoherence(benchmark::State& state) {
  const auto R = cc::barnett_composite_covariance(cc::BarnettModelSpec{}, 10);
  for (auto _ : state) benchmark::DoNotOptimize(cc::partial_coherence(R).rho2);
}
BENCHMARK(BM_PartialCoherence);

void BM_SampleCovariance(benchmark::State& state) {
  const auto& d = barnett_data();
  const auto panel = cc::lag_embed(d.x, d.y, cc::LagSpec::barnett(10));
  for (auto _ : state) benchmark::DoNotOptimize(cc::sample_covariance(panel).matrix().sum());
}
BENCHMARK(BM_SampleCovariance);

void BM_WindowStatistic(benchmark::State& state) {
  const auto& d = barnett_data();
  const auto spec = cc::LagSpec::barnett(10);
  for (auto _ : state) {
    const auto panel = cc::lag_embed(d.x, d.y, spec);
    benchmark::DoNotOptimize(cc::likelihood_ratio(cc::sample_covariance(panel)));
  }
}
BENCHMARK(BM_WindowStatistic);

void BM_SampleNull(benchmark::State& state) {
  const auto spec = cc::make_spec(10, 1, 10, 999);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cc::sample_null(spec, n, 42, 1).data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleNull)->Arg(4096)->Arg(65536);

void BM_GenBarnett(benchmark::State& state) {
  cc::BarnettModelSpec spec;
  spec.ma_order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cc::gen_barnett(spec, 1000, 42).x.data());
}
BENCHMARK(BM_GenBarnett)->Arg(0)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
