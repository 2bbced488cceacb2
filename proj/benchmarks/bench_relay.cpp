#include <benchmark/benchmark.h>

#include "relay/continuous_sim.hpp"
#include "relay/discrete_sim.hpp"
#include "relay/exact_solver.hpp"

namespace {

void BM_DiscreteSteps(benchmark::State& state) {
  const relay::DiscreteConfig cfg{state.range(0), 2, 0.1};
  relay::ReplicaStreams streams({1, 0}, cfg.m);
  auto s = relay::sample_uniform_state(cfg, streams.control());
  for (auto _ : state) {
    benchmark::DoNotOptimize(relay::step(s, cfg, streams));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DiscreteSteps)->Arg(11)->Arg(301);

void BM_DiscreteRun(benchmark::State& state) {
  const relay::DiscreteConfig cfg{11, 2, 0.1};
  relay::DiscreteRunOptions o;
  o.steps = state.range(0);
  std::uint64_t replica = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relay::simulate_discrete(cfg, o, {1, replica++}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscreteRun)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_ContinuousEvents(benchmark::State& state) {
  const relay::ContinuousConfig cfg{2.0, 1.0, 1.0, static_cast<int>(state.range(0))};
  relay::ReplicaStreams streams({1, 0}, cfg.m);
  auto s = relay::sample_uniform_continuous(cfg, streams);
  for (auto _ : state) {
    const auto e = relay::next_event(s, cfg);
    benchmark::DoNotOptimize(relay::handle_event(s, e, cfg, streams));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ContinuousEvents)->Arg(2)->Arg(8);

void BM_StationarySolve(benchmark::State& state) {
  const auto chain = relay::exact::ReducedChain::build(state.range(0), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relay::exact::stationary(chain));
  }
}
BENCHMARK(BM_StationarySolve)->Arg(11)->Arg(101)->Arg(201)->Arg(1001)->Unit(benchmark::kMillisecond);

void BM_TraceBvp(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(relay::exact::solve_trace_bvp(state.range(0), 0.3));
  }
}
BENCHMARK(BM_TraceBvp)->Arg(101)->Arg(1001);

}  // namespace

BENCHMARK_MAIN();
