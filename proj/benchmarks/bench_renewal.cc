#include <benchmark/benchmark.h>

#include "llp/renewal.hpp"

namespace {

using namespace llp;

Trajectory long_run(std::int64_t horizon) {
    const World world(ModelSpec::load_balancing({1.5, 0.1, 0.35, 10.8, 0.45, 0.8}), true);
    return run_trajectory(world, AgentSpec::coin(0.5), {0, 0}, horizon, 9001);
}

void BM_RecordTimes(benchmark::State& state) {
    const auto traj = long_run(state.range(0));
    const auto path = project(traj, {1.0, 0.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(record_times(path, traj.horizon() / 10));
    }
    state.SetItemsProcessed(state.iterations() * traj.horizon());
}
BENCHMARK(BM_RecordTimes)->Arg(100000);

void BM_SuccessTime(benchmark::State& state) {
    const auto traj = long_run(state.range(0));
    const ConeSpec cone{{1.0, 0.0}, true};
    for (auto _ : state) {
        benchmark::DoNotOptimize(success_time(traj, cone, traj.horizon() / 10));
    }
    state.SetItemsProcessed(state.iterations() * traj.horizon());
}
BENCHMARK(BM_SuccessTime)->Arg(100000);

}  // namespace
