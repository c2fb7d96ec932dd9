#include <benchmark/benchmark.h>

#include <vector>

#include "wqed/open_system.hpp"
#include "wqed/resonances.hpp"
#include "wqed/scattering.hpp"

using namespace wqed;

namespace {

ArrayConfig ladder(int n, double spacing = 0.5) {
    std::vector<double> dw(n);
    for (int i = 0; i < n; ++i) dw[i] = (i - 0.5 * (n - 1)) * spacing;
    return ArrayConfig::regular(dw);
}

void bench_scatter(benchmark::State& state) {
    const auto cfg = ladder(static_cast<int>(state.range(0)));
    double dk = -3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(scatter(cfg, dk));
        dk += 1e-4;
    }
}
BENCHMARK(bench_scatter)->Arg(2)->Arg(4)->Arg(8);

void bench_closed_form_sweep(benchmark::State& state) {
    const auto cfg = ladder(static_cast<int>(state.range(0)));
    const auto grid = linspace(-4.0, 4.0, 2001);
    for (auto _ : state) benchmark::DoNotOptimize(sweep(cfg, grid));
    state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(bench_closed_form_sweep)->Arg(4)->Arg(8);

void bench_decompose(benchmark::State& state) {
    const auto cfg = ladder(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(decompose(cfg));
}
BENCHMARK(bench_decompose)->Arg(4)->Arg(8);

void bench_find_poles(benchmark::State& state) {
    const auto cfg = ladder(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(find_poles(cfg));
}
BENCHMARK(bench_find_poles)->Arg(4)->Arg(8);

void bench_steady_state(benchmark::State& state) {
    DriveConfig dc;
    dc.base = ladder(static_cast<int>(state.range(0)));
    dc.delta_k = 0.2;
    dc.alpha = Complex{0.1, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(solve_steady(dc));
}
BENCHMARK(bench_steady_state)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
