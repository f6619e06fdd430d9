#pragma once

// Shared between the driver simulation and the frozen-equation solver:
// both must expand control policies and accumulate variation processes
// identically, or the coupling of equal-seed runs breaks.

#include "gsde/rng.hpp"
#include "gsde/time_grid.hpp"
#include "gsde/volatility.hpp"

#include <cstdint>
#include <vector>

namespace gsde::detail {

/// Volatility matrix per (control, step) for the chosen policy. The
/// per-step policy samples a deterministic level sequence keyed by
/// (seed, control, step).
inline std::vector<VolMatrix> control_path(const ControlGrid& cg, const TimeGrid& grid,
                                           std::uint64_t seed) {
    const std::size_t steps = grid.steps();
    std::vector<VolMatrix> theta;
    theta.reserve(cg.size() * steps);
    for (std::size_t c = 0; c < cg.size(); ++c) {
        for (std::size_t k = 0; k < steps; ++k) {
            if (cg.policy() == ControlGrid::Policy::static_per_path) {
                theta.push_back(cg.control(c));
            } else {
                const std::uint32_t pick =
                    rng::uniform_index(seed, static_cast<std::uint32_t>(c), 0,
                                       static_cast<std::uint32_t>(k),
                                       static_cast<std::uint32_t>(cg.size()));
                theta.push_back(cg.control(pick));
            }
        }
    }
    return theta;
}

/// Cumulative variation paths <B>^{ij}_{t}, one per (control, index pair),
/// accumulated analytically as (theta theta^T)_{ij} dt.
inline std::vector<double> accumulate_variation(const std::vector<VolMatrix>& theta,
                                                const TimeGrid& grid, std::size_t controls,
                                                std::size_t d) {
    const std::size_t np = grid.size();
    const std::size_t steps = grid.steps();
    const std::size_t pairs = d * (d + 1) / 2;
    std::vector<double> qv(controls * pairs * np, 0.0);
    for (std::size_t c = 0; c < controls; ++c) {
        std::size_t pair = 0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j, ++pair) {
                double* path = qv.data() + (c * pairs + pair) * np;
                double acc = 0.0;
                path[0] = 0.0;
                for (std::size_t k = 0; k < steps; ++k) {
                    acc += theta[c * steps + k].gram(i, j) * grid.dt(k);
                    path[k + 1] = acc;
                }
            }
        }
    }
    return qv;
}

} // namespace gsde::detail
