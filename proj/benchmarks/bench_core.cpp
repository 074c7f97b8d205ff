#include <benchmark/benchmark.h>

#include <vector>

#include "cobra/adversaries.hpp"
#include "cobra/baselines.hpp"
#include "cobra/cbarc.hpp"
#include "cobra/metrics.hpp"
#include "cobra/simulate.hpp"

using namespace cobra;

namespace {

BanditInstance eight_arms(std::size_t agents) {
  std::vector<ArmSpec> arms{ArmSpec::bernoulli(0.9)};
  for (int k = 0; k < 7; ++k) arms.push_back(ArmSpec::bernoulli(0.7));
  return BanditInstance(arms, agents);
}

void BM_SampleRewards(benchmark::State& state) {
  const BanditInstance inst = eight_arms(static_cast<std::size_t>(state.range(0)));
  RewardSampler sampler(inst, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample());
  state.SetItemsProcessed(state.iterations() * state.range(0) * 8);
}
BENCHMARK(BM_SampleRewards)->Arg(1)->Arg(4)->Arg(8);

void BM_PullProbabilities(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  ArmSet arms(k), active;
  std::vector<double> eps(k, cbarc::epsilon_at(5));
  for (std::size_t i = 0; i < k; ++i) {
    arms[i] = i;
    if (i % 3 == 0) {
      eps[i] = cbarc::epsilon_at(2);
    } else {
      active.push_back(i);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbarc::pull_probabilities(arms, active, cbarc::epsilon_at(5), eps, k));
  }
}
BENCHMARK(BM_PullProbabilities)->Arg(4)->Arg(16)->Arg(64);

void BM_CbarcRun(benchmark::State& state) {
  const BanditInstance inst = eight_arms(4);
  const auto horizon = static_cast<Round>(state.range(0));
  for (auto _ : state) {
    NullAdversary adv;
    benchmark::DoNotOptimize(cbarc::run_cbarc(inst, adv, horizon, 0.05, 1, true));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CbarcRun)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_CoopAaeRun(benchmark::State& state) {
  const BanditInstance inst = eight_arms(4);
  const auto horizon = static_cast<Round>(state.range(0));
  for (auto _ : state) {
    CoopAaePolicy policy(0.05);
    TargetedGapAdversary adv(2000.0, 0, 0.4);
    benchmark::DoNotOptimize(simulate(inst, policy, adv, horizon, {1, true}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoopAaeRun)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_Metrics(benchmark::State& state) {
  const BanditInstance inst = eight_arms(4);
  NullAdversary adv;
  const RunLog log = cbarc::run_cbarc(inst, adv, static_cast<Round>(state.range(0)), 0.05, 1, state.range(1) != 0);
  const std::vector<Round> cp = default_checkpoints(log.horizon);
  for (auto _ : state) benchmark::DoNotOptimize(compute_metrics(log, cp));
}
BENCHMARK(BM_Metrics)->Args({50000, 1})->Args({50000, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
