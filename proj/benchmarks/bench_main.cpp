#include "nlskam/kam.hpp"
#include "nlskam/melnikov.hpp"

#include <benchmark/benchmark.h>

using namespace nlskam;

namespace {

Eigen::VectorXd lam2(double a, double b) {
    Eigen::VectorXd l(2);
    l << a, b;
    return l;
}

void BM_CircleEnumeration(benchmark::State& state) {
    const std::int64_t span = state.range(0);
    SupportSet s0({-span, span});
    for (auto _ : state) {
        auto pts = circle_integer_points(s0, 0, 1);
        benchmark::DoNotOptimize(pts);
    }
}
BENCHMARK(BM_CircleEnumeration)->Arg(50)->Arg(500)->Arg(5000);

void BM_CheckGenericity(benchmark::State& state) {
    SupportSet s0({-7, 2, 11});
    const int L = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto rep = check_genericity(s0, L);
        benchmark::DoNotOptimize(rep);
    }
}
BENCHMARK(BM_CheckGenericity)->Arg(4)->Arg(10)->Arg(16);

void BM_EnumerateAdmissible(benchmark::State& state) {
    SupportSet s0({-1, 3});
    const EnumBounds bounds{state.range(0), state.range(0) + 1, 2};
    for (auto _ : state) {
        auto tuples = enumerate_admissible(s0, 3, bounds);
        benchmark::DoNotOptimize(tuples);
    }
    state.SetLabel(std::to_string(enumerate_admissible(s0, 3, bounds).size()) + " tuples");
}
BENCHMARK(BM_EnumerateAdmissible)->Arg(2)->Arg(3)->Arg(4);

void BM_MajorantNorm(benchmark::State& state) {
    TruncationGrid grid(SupportSet({0, 1}), static_cast<int>(state.range(0)), 2, 4);
    const auto fo = build_H1_Z1(grid.s0, lam2(0.7, 0.9), 1e-3, grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(majorant_norm(fo.H1, 0.5));
    }
}
BENCHMARK(BM_MajorantNorm)->Arg(6)->Arg(12)->Arg(20);

void BM_PoissonBracket(benchmark::State& state) {
    TruncationGrid grid(SupportSet({0, 1}), static_cast<int>(state.range(0)), 2, 4);
    const auto fo = build_H1_Z1(grid.s0, lam2(0.7, 0.9), 1e-3, grid);
    for (auto _ : state) {
        auto b = poisson_bracket(fo.H1, fo.H1);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_PoissonBracket)->Arg(6)->Arg(10)->Arg(14);

void BM_KamStep(benchmark::State& state) {
    SupportSet s0({0, 1});
    TruncationGrid grid(s0, static_cast<int>(state.range(0)), 2, 4);
    FrequencyContext ctx(s0, lam2(0.7, 0.9), 1e-3);
    const auto D = build_diag_initial(ctx, grid);
    const auto fo = build_H1_Z1(s0, lam2(0.7, 0.9), 1e-3, grid);
    TruncatedQuadHam Q = fo.H1;
    TruncatedQuadHam negZ = fo.Z1;
    negZ.scale(-1.0);
    Q += negZ;
    KamStepConfig cfg;
    cfg.N = 4;
    cfg.gamma = 0.05;
    cfg.tau = 4.0;
    cfg.eps = 1e-3;
    for (auto _ : state) {
        auto res = kam_step(D, Q, cfg);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_KamStep)->Arg(6)->Arg(10);

void BM_MeasureSample(benchmark::State& state) {
    SupportSet s0({-1, 3});
    MeasureConfig cfg;
    cfg.gamma_list = {0.01};
    cfg.eps = 1e-3;
    cfg.bounds = EnumBounds{2, 3, 2};
    cfg.nsamples = static_cast<std::uint64_t>(state.range(0));
    cfg.seed = 1;
    for (auto _ : state) {
        auto rep = measure_estimate(s0, cfg);
        benchmark::DoNotOptimize(rep);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MeasureSample)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
