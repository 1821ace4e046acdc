#include <benchmark/benchmark.h>

#include "msre/disorder.hpp"
#include "msre/energy.hpp"
#include "msre/height_grid.hpp"
#include "msre/solvers.hpp"

using namespace msre;

namespace {

EnergyModel model(int d, int n, std::int64_t L, DisorderKind kind, std::uint64_t seed)
{
    DisorderParams p;
    p.kind = kind;
    p.n = n;
    p.seed = seed;
    return EnergyModel(BoxDomain::cube(d, L), DisorderField(p), 1.0);
}

void BM_Dp1d(benchmark::State& state)
{
    const auto L = state.range(0);
    const auto m = model(1, 1, L, DisorderKind::white, 7);
    const auto grid = HeightGrid::policy(1, 1, L, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_dp_1d(m, grid).energy);
    state.SetComplexityN(L);
}
BENCHMARK(BM_Dp1d)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_Mincut2d(benchmark::State& state)
{
    const auto L = state.range(0);
    const auto m = model(2, 1, L, DisorderKind::white, 7);
    const auto grid = HeightGrid::policy(2, 1, L, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_mincut(m, grid).energy);
}
BENCHMARK(BM_Mincut2d)->RangeMultiplier(2)->Range(2, 16)->Unit(benchmark::kMillisecond);

void BM_LinearClosedForm(benchmark::State& state)
{
    const auto L = state.range(0);
    const auto m = model(2, 1, L, DisorderKind::linear, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_linear_closed_form(m).energy);
}
BENCHMARK(BM_LinearClosedForm)->RangeMultiplier(4)->Range(8, 128)->Unit(benchmark::kMillisecond);

}  // namespace
