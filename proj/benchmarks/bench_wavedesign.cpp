#include <benchmark/benchmark.h>

#include "wavedesign/design.hpp"
#include "wavedesign/metrics.hpp"
#include "wavedesign/optimizer.hpp"
#include "wavedesign/scene.hpp"
#include "wavedesign/waveforms.hpp"

using namespace wavedesign;

namespace {

// TBP = B T with B = 256 Hz and fs = 8 B.
SampledSignal lfm_of(benchmark::State& st) {
  const double T = static_cast<double>(st.range(0)) / 256.0;
  return synth_lfm(256, T, 2048);
}

void BM_Autocorrelation(benchmark::State& st) {
  const auto s = lfm_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(autocorrelation(s));
  st.SetComplexityN(static_cast<long>(s.size()));
}
BENCHMARK(BM_Autocorrelation)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SynthMtsfm(benchmark::State& st) {
  const auto p = tapered_fm_phase_fit(static_cast<std::size_t>(st.range(0)), 256, 1, 1);
  for (auto _ : st) benchmark::DoNotOptimize(synth_mtsfm(p, 2048));
}
BENCHMARK(BM_SynthMtsfm)->Arg(8)->Arg(32)->Arg(128);

OptimizationProblem tbp256() { return make_region_design_problem(RegionDesignConfig{}); }

void BM_ObjectiveValue(benchmark::State& st) {
  const auto p = tbp256();
  const ObjectiveEvaluator ev(p);
  const auto x = p.initial.flatten();
  for (auto _ : st) benchmark::DoNotOptimize(ev.value(x));
}
BENCHMARK(BM_ObjectiveValue);

void BM_ObjectiveGradient(benchmark::State& st) {
  const auto p = tbp256();
  const ObjectiveEvaluator ev(p);
  const auto x = p.initial.flatten();
  std::vector<double> g(x.size());
  for (auto _ : st) benchmark::DoNotOptimize(ev.value_and_gradient(x, g));
}
BENCHMARK(BM_ObjectiveGradient);

void BM_FiniteDifferenceGradient(benchmark::State& st) {
  const auto p = tbp256();
  for (auto _ : st) benchmark::DoNotOptimize(finite_difference_gradient(p.initial, p, 1e-6));
}
BENCHMARK(BM_FiniteDifferenceGradient)->Unit(benchmark::kMillisecond);

void BM_AmbiguityFunction(benchmark::State& st) {
  const auto s = synth_lfm(256, 1, 2048);
  const auto q = static_cast<std::size_t>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(ambiguity_function(s, 0.25, 64, 257, q));
}
BENCHMARK(BM_AmbiguityFunction)->Arg(17)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_MatchedFilterBank(benchmark::State& st) {
  const auto s = synth_lfm(256, 1, 2048);
  const auto scene = graded_echo_scene(256);
  const auto rx = simulate_returns(s, scene);
  std::vector<double> nus;
  for (long i = 0; i < st.range(0); ++i) nus.push_back(-32.0 + 64.0 * double(i) / double(std::max(1L, st.range(0) - 1)));
  for (auto _ : st) benchmark::DoNotOptimize(mf_bank(rx, s, nus));
}
BENCHMARK(BM_MatchedFilterBank)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
