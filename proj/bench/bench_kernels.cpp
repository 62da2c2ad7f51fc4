#include "rumorsis/kernels.hpp"
#include "rumorsis/parallel.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace rumorsis;

namespace {

std::vector<Allocation> alpha_grid(int n)
{
    std::vector<Allocation> v;
    for (int i = 0; i < n; ++i)
        v.push_back(Allocation::uniform(static_cast<double>(i) / (n - 1)));
    return v;
}

std::vector<kernels::Scenario> scenario_grid(int n)
{
    std::vector<kernels::Scenario> v;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            v.push_back({ModelParams::from_lambda(1.0 + 4.0 * i / (n - 1), 0.9 * j / (n - 1)), Allocation::uniform(0.1)});
    return v;
}

void BM_PrevalenceGridSerial(benchmark::State& st)
{
    const auto grid = alpha_grid(static_cast<int>(st.range(0)));
    const ModelParams p = ModelParams::from_lambda(2, 0.3);
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::serial::prevalence_grid(p, grid, kernels::Prevalence::Truth, {}));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_PrevalenceGridParallel(benchmark::State& st)
{
    const auto grid = alpha_grid(static_cast<int>(st.range(0)));
    const ModelParams p = ModelParams::from_lambda(2, 0.3);
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::prevalence_grid(p, grid, kernels::Prevalence::Truth, {}));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_SteadyStatesSerial(benchmark::State& st)
{
    const auto sc = scenario_grid(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::serial::steady_states(sc, {}));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(sc.size()));
}

void BM_SteadyStatesParallel(benchmark::State& st)
{
    const auto sc = scenario_grid(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::steady_states(sc, {}));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(sc.size()));
}

void BM_IntegrateManySerial(benchmark::State& st)
{
    const auto starts = random_interior_states(static_cast<int>(st.range(0)), 1);
    const ModelParams p = ModelParams::from_lambda(2, 0.3);
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::serial::integrate_many(starts, p, Allocation::uniform(0.2), {}));
}

void BM_IntegrateManyParallel(benchmark::State& st)
{
    const auto starts = random_interior_states(static_cast<int>(st.range(0)), 1);
    const ModelParams p = ModelParams::from_lambda(2, 0.3);
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::integrate_many(starts, p, Allocation::uniform(0.2), {}));
}

} // namespace

BENCHMARK(BM_PrevalenceGridSerial)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrevalenceGridParallel)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SteadyStatesSerial)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SteadyStatesParallel)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IntegrateManySerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegrateManyParallel)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
