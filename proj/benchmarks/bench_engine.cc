#include <benchmark/benchmark.h>

#include "llp/engine.hpp"
#include "llp/harness.hpp"

namespace {

using namespace llp;

World standard_world(bool free) {
    return World(ModelSpec::load_balancing({1.5, 0.1, 0.35, 10.8, 0.45, 0.8}), free);
}

void BM_SampleStep(benchmark::State& state) {
    const auto law = free_jump_law(standard_world(false).model(), Action::Red);
    Xoshiro256pp rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(law.sample(rng.u01()));
    }
}
BENCHMARK(BM_SampleStep);

void BM_QLearningTrajectory(benchmark::State& state) {
    const World world = standard_world(false);
    const AgentSpec agent = qlearning_setting(true, true);
    const std::int64_t horizon = state.range(0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trajectory(world, agent, {0, 0}, horizon, ++seed));
    }
    state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_QLearningTrajectory)->Arg(1000)->Arg(10000);

void BM_CoinFreeTrajectory(benchmark::State& state) {
    const World world = standard_world(true);
    const AgentSpec agent = AgentSpec::coin(0.5);
    const std::int64_t horizon = state.range(0);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trajectory(world, agent, {0, 0}, horizon, ++seed));
    }
    state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_CoinFreeTrajectory)->Arg(10000);

}  // namespace
