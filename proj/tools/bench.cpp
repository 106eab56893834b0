// Serial-vs-parallel benchmarks for the batch kernels.
#include <benchmark/benchmark.h>

#include "voltrip/model.hpp"
#include "voltrip/rng.hpp"
#include "voltrip/synth.hpp"
#include "voltrip/volatility.hpp"

namespace {

std::vector<voltrip::DrivingCycle> make_cycles(int n_trips, int n_seconds) {
  std::vector<voltrip::DrivingCycle> cycles;
  for (int t = 0; t < n_trips; ++t) {
    voltrip::CycleParams p;
    p.n_seconds = n_seconds;
    p.base_speed_mph = 30;
    p.target_volatility_pct = 13;
    p.seed = voltrip::Rng::stream(7, static_cast<std::uint64_t>(t)).next_u64();
    cycles.push_back(voltrip::gen_cycle(p, "T" + std::to_string(t)));
  }
  return cycles;
}

void bm_volatility_serial(benchmark::State& state) {
  auto cycles = make_cycles(static_cast<int>(state.range(0)), 600);
  for (auto _ : state) {
    auto batch = voltrip::trip_volatilities_serial(cycles);
    benchmark::DoNotOptimize(batch);
  }
}

void bm_volatility_parallel(benchmark::State& state) {
  auto cycles = make_cycles(static_cast<int>(state.range(0)), 600);
  for (auto _ : state) {
    auto batch = voltrip::trip_volatilities(cycles);
    benchmark::DoNotOptimize(batch);
  }
}

void bm_bootstrap(benchmark::State& state) {
  auto design = voltrip::hetero_design(2000, 11);
  for (auto _ : state) {
    auto se = voltrip::bootstrap_se(design, 0.5, static_cast<int>(state.range(0)), 3);
    benchmark::DoNotOptimize(se);
  }
}

} // namespace

BENCHMARK(bm_volatility_serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_volatility_parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_bootstrap)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
