#include <benchmark/benchmark.h>

#include "impmatch/freq_analysis.hpp"
#include "impmatch/matcher.hpp"
#include "impmatch/presets.hpp"

namespace {

using namespace impmatch;

void BM_SimulateSweep(benchmark::State& state) {
  ChirpSpec chirp;
  chirp.duration = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto ts = simulate_sweep(presets::knee(), presets::kHardwareGains, chirp, SimConfig{});
    benchmark::DoNotOptimize(ts.measured.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 40000);
}
BENCHMARK(BM_SimulateSweep)->Arg(10)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_EstimateFrf(benchmark::State& state) {
  const auto ts = simulate_sweep(presets::knee(), presets::kHardwareGains, ChirpSpec{}, SimConfig{});
  WelchOptions options;
  options.window_seconds = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto bode = estimate_frf(ts, options);
    benchmark::DoNotOptimize(bode.magnitude_db.data());
  }
}
BENCHMARK(BM_EstimateFrf)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_AnalyticGridMatch(benchmark::State& state) {
  const auto reference = estimate_frf(
      simulate_sweep(presets::knee(), presets::kHardwareGains, ChirpSpec{}, SimConfig{}));
  MatchOptions options;
  options.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    auto r = grid_match(reference, presets::knee(), GainGrid{}, FrequencyBand{}, options);
    benchmark::DoNotOptimize(r.best_error);
  }
}
BENCHMARK(BM_AnalyticGridMatch)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
