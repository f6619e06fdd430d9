#pragma once

#include "gsde/coefficients.hpp"
#include "gsde/ensemble.hpp"
#include "gsde/metric.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gsde {

/// One Picard iteration record. delta is the process distance between the
/// new and the previous distribution process (on thinned supports).
struct TraceRow {
    std::size_t iteration = 0;
    double delta = 0.0;
    double seconds = 0.0;
    std::size_t particles = 0;
    std::size_t controls = 0;
};

struct ConvergenceTrace {
    std::vector<TraceRow> rows;
};

struct SolverOptions {
    std::size_t replicates = 1000;
    std::uint64_t seed = 42;
    ParallelOptions parallel;
    double divergence_guard = 1e12; ///< |X| beyond this aborts with context
    std::size_t thin_cap = 64;      ///< per-measure particle cap for metric LPs
};

/// Explicit Euler solve of the frozen equation: coefficients read the given
/// distribution process instead of the running empirical law. Driver
/// increments are generated exactly as in simulate_gbm (same keys), so runs
/// with equal seeds are coupled path by path.
PathEnsemble euler_solve_frozen(const Coefficients& c, const DistributionProcess& frozen,
                                std::span<const double> x0, const VolatilityUncertainty& u,
                                const ControlGrid& cg, const TimeGrid& grid,
                                const SolverOptions& opts);

struct PicardOptions {
    double tol = 1e-3;
    std::size_t max_iter = 15;
    /// Replaces the default initialization (the Dirac process at x0).
    std::optional<DistributionProcess> initial;
};

struct PicardResult {
    PathEnsemble ensemble;                 ///< ensemble of the last iterate
    DistributionProcess distribution;      ///< its distribution process
    ConvergenceTrace trace;                ///< rows k = 0, 1, ...
    bool converged = false;
    double thinning_delta = 0.0; ///< |delta(cap) - delta(2*cap)| of the final iterate
};

/// Picard iteration on distribution processes.
///
/// Iterate 0 solves the frozen equation with every coefficient distribution
/// argument held at the initialization (Dirac at x0 by default) and records
/// delta_0 against that initialization; iterate k >= 1 feeds the previous
/// iterate's distribution process back in. Identical seeds across iterations
/// couple the driver paths, so deltas reflect distribution change rather
/// than sampling noise. Stops when delta < tol, else flags non-convergence.
PicardResult picard_solve(const Coefficients& c, std::span<const double> x0,
                          const VolatilityUncertainty& u, const ControlGrid& cg,
                          const TimeGrid& grid, const SolverOptions& opts,
                          const PicardOptions& picard = {});

} // namespace gsde
