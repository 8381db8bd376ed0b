#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "groundstate/flows.hpp"
#include "groundstate/grid.hpp"
#include "groundstate/shooting.hpp"

using namespace groundstate;

namespace {

void BM_Laplacian(benchmark::State& state) {
    const auto g = build_grid(15.0, static_cast<int>(state.range(0)), 3);
    const auto v = RadialProfile::sample(g, [](double r) { return std::exp(-r * r); });
    std::vector<double> out(g.size());
    for (auto _ : state) {
        apply_laplacian(g, v.values(), out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Laplacian)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

void BM_TridiagonalSolve(benchmark::State& state) {
    const auto g = build_grid(15.0, static_cast<int>(state.range(0)), 3);
    const auto a = assemble_operator(g, 10.0, 1.0);
    const std::vector<double> rhs(g.size(), 1.0);
    for (auto _ : state) {
        const TridiagonalLU lu(a);
        benchmark::DoNotOptimize(lu.solve(rhs));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TridiagonalSolve)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// Fixed number of Nehari steps from the default start.
void BM_NehariSteps(benchmark::State& state) {
    FlowConfig f;
    f.M = static_cast<int>(state.range(0));
    f.max_iter = 50;
    f.tol = 1e-300;
    for (auto _ : state) {
        try {
            benchmark::DoNotOptimize(nehari_flow(1.0, 3, f));
        } catch (const std::exception&) {
            // Hitting the iteration cap is the point here.
        }
    }
    state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_NehariSteps)->Arg(1500)->Arg(6000)->Unit(benchmark::kMillisecond);

void BM_Shot(benchmark::State& state) {
    const ShootingConfig cfg = ShootingConfig::for_u();
    for (auto _ : state) benchmark::DoNotOptimize(integrate_ivp_u(4.35, 1.0, 3, cfg));
}
BENCHMARK(BM_Shot)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
