#include "gsde/solver.hpp"

#include <benchmark/benchmark.h>

using namespace gsde;

static void BM_simulate_paths(benchmark::State& state) {
    const auto u = VolatilityUncertainty::interval(1.0, 2.0);
    const auto cg = ControlGrid::uniform(u, 5);
    const auto grid = TimeGrid::uniform(1.0, 200);
    const auto reps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const auto ens = simulate_gbm(u, cg, grid, reps, 7, {.threads = 2});
        benchmark::DoNotOptimize(ens.driver_at(0, 0, 200, 0));
    }
    state.SetItemsProcessed(static_cast<benchmark::IterationCount>(
        state.iterations() * 5 * reps * 200));
}
BENCHMARK(BM_simulate_paths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_euler_solve(benchmark::State& state) {
    const auto u = VolatilityUncertainty::interval(0.2, 0.2);
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(1.0, 200);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", 1.0}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    const std::vector<double> x0{1.0};
    const auto frozen = DistributionProcess::dirac(grid, x0);
    SolverOptions opts;
    opts.replicates = static_cast<std::size_t>(state.range(0));
    opts.parallel.threads = 2;
    for (auto _ : state) {
        const auto ens = euler_solve_frozen(coeff, frozen, x0, u, cg, grid, opts);
        benchmark::DoNotOptimize(ens.state_at(0, 0, 200, 0));
    }
    state.SetItemsProcessed(static_cast<benchmark::IterationCount>(
        state.iterations() * opts.replicates * 200));
}
BENCHMARK(BM_euler_solve)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_picard_iteration(benchmark::State& state) {
    const auto u = VolatilityUncertainty::interval(0.2, 0.2);
    const auto cg = ControlGrid::uniform(u, 1);
    const auto grid = TimeGrid::uniform(1.0, 100);
    CoefficientParams p{{"a", -1.0}, {"b", 0.5}, {"sigma", 1.0}};
    const auto coeff = make_coefficients("mean-field-ou", p, 1, 1);
    const std::vector<double> x0{1.0};
    SolverOptions opts;
    opts.replicates = 2000;
    opts.parallel.threads = 2;
    PicardOptions popts;
    popts.tol = 1e-3;
    popts.max_iter = 15;
    for (auto _ : state) {
        const auto result = picard_solve(coeff, x0, u, cg, grid, opts, popts);
        benchmark::DoNotOptimize(result.trace.rows.size());
    }
}
BENCHMARK(BM_picard_iteration)->Unit(benchmark::kMillisecond);
