#include <benchmark/benchmark.h>

#include "kickwig/coefficients.hpp"
#include "kickwig/state_map.hpp"
#include "kickwig/wigner_map.hpp"

using namespace kickwig;

namespace {

// A spread state of half-width range(0) for the kick benchmarks.
LadderState spread_state(int width) {
  const auto spectrum = build_kick_spectrum(PotentialSpec::sine(), width / 2.0, width);
  return kick_step(init_ladder(1, 1.7), spectrum);
}

void kick(benchmark::State& st, bool direct) {
  const int width = static_cast<int>(st.range(0));
  const auto spectrum = build_kick_spectrum(PotentialSpec::sine(), 1.0, 32);
  const auto state = spread_state(width);
  LadderOptions opts;
  opts.direct_crossover = direct ? std::size_t(-1) : 0;
  opts.fixed_truncation = true;
  opts.tail_budget = 1.0;
  for (auto _ : st) benchmark::DoNotOptimize(kick_step(state, spectrum, opts));
  st.SetComplexityN(width);
}

void BM_KickDirect(benchmark::State& st) { kick(st, true); }
void BM_KickFft(benchmark::State& st) { kick(st, false); }

void BM_KernelBuild(benchmark::State& st) {
  const auto grid = static_cast<std::size_t>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(build_wigner_kernel(PotentialSpec::sine(), 1.0, grid, static_cast<int>(grid / 16)));
}

void BM_WignerStep(benchmark::State& st) {
  const std::size_t grid = 1024;
  const auto kernel = build_adaptive_wigner_kernel(PotentialSpec::sine(), 1.0, grid);
  auto field = init_wigner(grid, 2, 1.7);
  for (int n = 0; n < static_cast<int>(st.range(0)); ++n) field = wigner_floquet_step(std::move(field), kernel);
  for (auto _ : st) benchmark::DoNotOptimize(wigner_floquet_step(field, kernel));
  st.counters["radius"] = field.radius();
}

void BM_AdaptiveSpectrum(benchmark::State& st) {
  const auto p = st.range(0) ? PotentialSpec::triangle() : PotentialSpec::sine();
  for (auto _ : st) benchmark::DoNotOptimize(build_adaptive_kick_spectrum(p, 2.0));
}

}  // namespace

BENCHMARK(BM_KickDirect)->RangeMultiplier(4)->Range(64, 16384);
BENCHMARK(BM_KickFft)->RangeMultiplier(4)->Range(64, 16384);
BENCHMARK(BM_KernelBuild)->RangeMultiplier(2)->Range(256, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WignerStep)->Arg(1)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdaptiveSpectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
