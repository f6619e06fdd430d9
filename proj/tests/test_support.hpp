#pragma once

#include "gsde/rng.hpp"
#include "gsde/sublinear.hpp"

#include <cstdint>
#include <vector>

namespace gsde::testing {

/// Deterministic uniform in [lo, hi) keyed by (seed, a, b, c).
inline double uniform(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                      double lo = 0.0, double hi = 1.0) {
    const auto block = rng::philox4x32(seed, {a, b, c, 0x7e57u});
    return lo + (hi - lo) * rng::uniform_closed_open(block[0], block[1]);
}

inline std::uint32_t uniform_int(std::uint64_t seed, std::uint32_t a, std::uint32_t b,
                                 std::uint32_t c, std::uint32_t n) {
    const auto block = rng::philox4x32(seed, {a, b, c, 0xfeedu});
    return block[2] % n;
}

inline WeightedMeasure measure1d(std::vector<double> points, std::vector<double> weights) {
    return WeightedMeasure(std::move(points), 1, std::move(weights));
}

inline EmpiricalSublinearDistribution dist1d(std::vector<WeightedMeasure> ms) {
    return EmpiricalSublinearDistribution(std::move(ms));
}

/// Random instance for metric tests: measures draw their particles from a
/// small shared pool of distinct sites, so the union support stays under the
/// brute-force oracle cap.
inline EmpiricalSublinearDistribution random_pool_distribution(std::uint64_t seed,
                                                               std::uint32_t tag,
                                                               std::size_t pool_size,
                                                               std::size_t max_measures,
                                                               std::size_t max_particles) {
    std::vector<double> pool(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i)
        pool[i] = uniform(seed, 0xF00Du, static_cast<std::uint32_t>(i), 0, -5.0, 5.0);

    const std::size_t n_measures = 1 + uniform_int(seed, tag, 1, 0, max_measures);
    std::vector<WeightedMeasure> measures;
    for (std::size_t mi = 0; mi < n_measures; ++mi) {
        const std::size_t n_particles =
            1 + uniform_int(seed, tag, 2, static_cast<std::uint32_t>(mi), max_particles);
        std::vector<double> pts(n_particles);
        std::vector<double> w(n_particles);
        double total = 0.0;
        for (std::size_t i = 0; i < n_particles; ++i) {
            pts[i] = pool[uniform_int(seed, tag, 3,
                                      static_cast<std::uint32_t>(mi * 101 + i),
                                      static_cast<std::uint32_t>(pool_size))];
            w[i] = 0.05 + uniform(seed, tag, 4, static_cast<std::uint32_t>(mi * 101 + i));
            total += w[i];
        }
        for (double& x : w) x /= total;
        measures.emplace_back(std::move(pts), 1, std::move(w));
    }
    return EmpiricalSublinearDistribution(std::move(measures));
}

} // namespace gsde::testing
