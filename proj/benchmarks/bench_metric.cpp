#include "gsde/metric.hpp"
#include "test_support.hpp"

#include <benchmark/benchmark.h>

using namespace gsde;

namespace {

EmpiricalSublinearDistribution sampled(std::uint64_t seed, std::uint32_t tag,
                                       std::size_t particles, std::size_t measures) {
    std::vector<WeightedMeasure> ms;
    for (std::size_t m = 0; m < measures; ++m) {
        std::vector<double> pts(particles);
        for (std::size_t i = 0; i < particles; ++i)
            pts[i] = testing::uniform(seed, tag, static_cast<std::uint32_t>(m),
                                      static_cast<std::uint32_t>(i), -4.0, 4.0);
        ms.push_back(WeightedMeasure::uniform_on(std::move(pts), 1));
    }
    return EmpiricalSublinearDistribution(std::move(ms));
}

} // namespace

static void BM_d1_support_size(benchmark::State& state) {
    const std::size_t particles = static_cast<std::size_t>(state.range(0));
    const auto F = sampled(1, 10, particles, 2);
    const auto G = sampled(1, 20, particles, 2);
    for (auto _ : state) benchmark::DoNotOptimize(d1(F, G).value);
    state.SetComplexityN(static_cast<benchmark::IterationCount>(particles));
}
BENCHMARK(BM_d1_support_size)->Range(8, 256)->Complexity();

static void BM_d1_measure_count(benchmark::State& state) {
    const std::size_t measures = static_cast<std::size_t>(state.range(0));
    const auto F = sampled(2, 10, 32, measures);
    const auto G = sampled(2, 20, 32, measures);
    for (auto _ : state) benchmark::DoNotOptimize(d1(F, G).value);
}
BENCHMARK(BM_d1_measure_count)->DenseRange(1, 9, 2);

static void BM_d1_bruteforce(benchmark::State& state) {
    const auto F = testing::random_pool_distribution(3, 0, static_cast<std::size_t>(state.range(0)), 3, 4);
    const auto G = testing::random_pool_distribution(3, 1, static_cast<std::size_t>(state.range(0)), 3, 4);
    for (auto _ : state) benchmark::DoNotOptimize(d1_bruteforce(F, G, 16));
}
BENCHMARK(BM_d1_bruteforce)->DenseRange(8, 12, 2);

static void BM_d1T_process(benchmark::State& state) {
    const auto grid = TimeGrid::uniform(1.0, static_cast<std::size_t>(state.range(0)));
    std::vector<EmpiricalSublinearDistribution> fs, gs;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        fs.push_back(sampled(4, static_cast<std::uint32_t>(k), 64, 1));
        gs.push_back(sampled(5, static_cast<std::uint32_t>(k), 64, 1));
    }
    const DistributionProcess Fp(grid, fs);
    const DistributionProcess Gp(grid, gs);
    for (auto _ : state) benchmark::DoNotOptimize(d1T(Fp, Gp).value);
}
BENCHMARK(BM_d1T_process)->Arg(50)->Arg(200);
