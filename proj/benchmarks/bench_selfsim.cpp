#include "selfsim/families.hpp"
#include "selfsim/hyperfun.hpp"
#include "selfsim/verify.hpp"

#include <benchmark/benchmark.h>

using namespace selfsim;

static void BM_Kummer(benchmark::State& state) {
    const hyper::PFQSpec spec({0.5}, {1.5});
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hyper::eval_pfq(spec, x).value);
}
BENCHMARK(BM_Kummer)->Arg(-30)->Arg(-15)->Arg(-1)->Arg(1)->Arg(15);

static void BM_Clausen(benchmark::State& state) {
    const hyper::PFQSpec spec({1.0, 4.0 / 3, 5.0 / 3}, {1.4, 1.8});
    for (auto _ : state) benchmark::DoNotOptimize(hyper::eval_pfq(spec, -0.9).value);
}
BENCHMARK(BM_Clausen);

static void BM_Psi2(benchmark::State& state) {
    const hyper::Psi2Spec spec(0.5, 0.75, 1.25);
    for (auto _ : state) benchmark::DoNotOptimize(hyper::eval_psi2(spec, -2.0, -1.5).value);
}
BENCHMARK(BM_Psi2);

static void BM_KdF(benchmark::State& state) {
    const hyper::KdFSpec spec({0.8}, {1.3}, {}, {0.6}, {0.9, 0.7}, {1.1});
    for (auto _ : state) benchmark::DoNotOptimize(hyper::eval_kdf(spec, -0.8, 0.6).value);
}
BENCHMARK(BM_KdF);

static void BM_Branch(benchmark::State& state) {
    const families::FamilyParams params;
    const families::SolutionBranch branch{families::FamilyId::T5, static_cast<int>(state.range(0)), 1.0};
    const families::Point p{1.1, 0.8, 1.2};
    for (auto _ : state) benchmark::DoNotOptimize(families::eval_branch(branch, params, p));
}
BENCHMARK(BM_Branch)->DenseRange(1, 9, 4);

static void BM_Sweep(benchmark::State& state) {
    const families::FamilyParams params;
    const auto family = families::FamilyId::P3;
    const auto scheme = verify::default_scheme(family);
    const auto grid = verify::make_grid(family, params, verify::default_grid(family), scheme);
    for (auto _ : state) {
        const auto r = verify::pde_residual_sweep({family, 4, 1.0}, params, grid, scheme);
        benchmark::DoNotOptimize(r.max_abs_residual);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
