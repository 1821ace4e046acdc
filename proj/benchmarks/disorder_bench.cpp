#include <benchmark/benchmark.h>

#include <vector>

#include "msre/disorder.hpp"

using namespace msre;

namespace {

void BM_WhiteEvalMany(benchmark::State& state)
{
    DisorderParams p;
    p.kind = DisorderKind::white;
    p.n = 1;
    p.seed = 3;
    const DisorderField eta(p);
    const auto levels = static_cast<std::size_t>(state.range(0));
    std::vector<double> t(levels), out(levels);
    for (std::size_t k = 0; k < levels; ++k)
        t[k] = -8.0 + 16.0 * static_cast<double>(k) / static_cast<double>(levels);
    const std::int64_t v[] = {3, -5};
    for (auto _ : state)
    {
        eta.at(v).eval_many(t, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(levels));
}
BENCHMARK(BM_WhiteEvalMany)->Arg(64)->Arg(1024);

void BM_WhitePointEval(benchmark::State& state)
{
    DisorderParams p;
    p.kind = DisorderKind::white;
    p.n = 2;
    p.seed = 3;
    const DisorderField eta(p);
    const std::int64_t v[] = {1, 2};
    const double h[] = {0.3, -1.7};
    for (auto _ : state)
        benchmark::DoNotOptimize(eta.at(v).eval(h));
}
BENCHMARK(BM_WhitePointEval);

}  // namespace
