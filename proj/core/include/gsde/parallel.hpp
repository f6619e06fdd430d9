#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace gsde {

/// Execution width for scenario-parallel loops. Results never depend on it.
struct ParallelOptions {
    std::size_t threads = 1;
};

/// Runs `body(begin, end)` over a partition of [0, n) on up to
/// `options.threads` workers. Chunks are contiguous and disjoint; exceptions
/// thrown by workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const ParallelOptions& options,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Deterministic pairwise (recursive halving) summation. The reduction order
/// is fixed by the element order alone, so sums are reproducible regardless
/// of how the elements were produced.
double pairwise_sum(std::span<const double> values);

/// Mean / unbiased variance / standard error of the mean, all via pairwise
/// summation.
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

MomentSummary summarize(std::span<const double> values);

} // namespace gsde
