#include <benchmark/benchmark.h>

#include "cgprof/engine_callgraph.hpp"
#include "cgprof/engine_flat.hpp"
#include "cgprof/workload.hpp"

using namespace cgprof;

namespace {

const workload::Script& nested_workload() {
    static const workload::Script script = workload::parse(
        "def leaf(){}\n"
        "def mid(){call leaf; call leaf; call leaf;}\n"
        "def top(){call mid; call leaf; call mid;}\n"
        "repeat 1000 { call top; }\n");
    return script;
}

void run_unprofiled(benchmark::State& state) {
    for (auto _ : state) {
        TimeSource clock = TimeSource::real();
        HookRegistry reg(clock);
        benchmark::DoNotOptimize(workload::run(nested_workload(), clock, reg));
    }
}

template <typename Profiler>
void run_profiled(benchmark::State& state) {
    for (auto _ : state) {
        TimeSource clock = TimeSource::real();
        HookRegistry reg(clock);
        Profiler prof;
        prof.start(reg);
        workload::run(nested_workload(), clock, reg);
        benchmark::DoNotOptimize(prof.stop());
    }
    // 11 calls per iteration of the loop body, two events each.
    state.SetItemsProcessed(state.iterations() * 1000 * 11 * 2);
}

}  // namespace

BENCHMARK(run_unprofiled);
BENCHMARK(run_profiled<FlatProfiler>);
BENCHMARK(run_profiled<CallGraphProfiler>);

BENCHMARK_MAIN();
