#include <benchmark/benchmark.h>

#include "prbox/boxes.hpp"
#include "prbox/harness.hpp"
#include "prbox/lhv.hpp"
#include "prbox/random_stream.hpp"

namespace {

using namespace prbox;

void BM_RandomStreamNextU64(benchmark::State& state) {
  RandomStream rng(1729, 0, Side::joint, Purpose::box_draw);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.next_u64());
  }
}
BENCHMARK(BM_RandomStreamNextU64);

void BM_IdealPrSample(benchmark::State& state) {
  RandomStream rng(1729, 0, Side::joint, Purpose::box_draw);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ideal_pr_sample(kOne, kOne, rng));
  }
}
BENCHMARK(BM_IdealPrSample);

void BM_NoisyPrSample(benchmark::State& state) {
  RandomStream rng(1729, 0, Side::joint, Purpose::box_draw);
  const NoisyBoxSpec spec{quantum_bound_p()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(noisy_pr_sample(spec, kOne, kOne, rng));
  }
}
BENCHMARK(BM_NoisyPrSample);

void BM_OptimalLhvSample(benchmark::State& state) {
  RandomStream rng(1729, 0, Side::joint, Purpose::shared_bits);
  for (auto _ : state) {
    const SharedRandomness shared = draw_shared(rng);
    benchmark::DoNotOptimize(optimal_lhv_sample(shared, kOne, kZero));
  }
}
BENCHMARK(BM_OptimalLhvSample);

void BM_EnumerateAndScoreStrategies(benchmark::State& state) {
  for (auto _ : state) {
    for (const DeterministicStrategy& s : enumerate_strategies()) {
      benchmark::DoNotOptimize(score_strategy(s));
    }
  }
}
BENCHMARK(BM_EnumerateAndScoreStrategies);

void BM_BellBound(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(bell_bound());
  }
}
BENCHMARK(BM_BellBound);

void BM_ParallelLivesTrial(benchmark::State& state) {
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pl_meeting_records(1729, trial++, kOne, kOne));
  }
}
BENCHMARK(BM_ParallelLivesTrial);

void BM_RunProtocolIdeal(benchmark::State& state) {
  RunParams params;
  params.model = Model::ideal;
  params.trials = static_cast<std::uint64_t>(state.range(0));
  params.seed = 1729;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_protocol(params));
  }
}
BENCHMARK(BM_RunProtocolIdeal)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
