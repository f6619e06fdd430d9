#pragma once

#include <array>
#include <cstdint>

namespace gsde {

/// Counter-based random number generation (Philox 4x32-10).
///
/// Every draw is a pure function of (seed, counter); there is no sequential
/// state, so scenarios can be generated in any order by any number of workers
/// and still produce identical streams.
namespace rng {

/// One Philox 4x32-10 block: 128-bit counter, 64-bit key, 4x32-bit output.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& counter);

/// Uniform double in (0, 1], built from 64 bits of one block half.
double uniform_open_closed(std::uint32_t hi, std::uint32_t lo);

/// Uniform double in [0, 1).
double uniform_closed_open(std::uint32_t hi, std::uint32_t lo);

/// Domain tags keep independent uses of the same (seed, replicate, step)
/// triple from colliding on one counter.
enum class Domain : std::uint32_t {
    driver_noise = 0,   ///< Gaussian increments of the driving process
    control_policy = 1, ///< per-step volatility selection
    generic = 2,        ///< auxiliary samplers (tests, spot checks)
};

/// Standard normal draw keyed by (seed, stream, replicate, step, component).
///
/// `stream` is the common-random-numbers knob: callers that want coupled
/// draws across volatility controls pass the same stream id for all of them.
double standard_normal(std::uint64_t seed, std::uint32_t stream, std::uint32_t replicate,
                       std::uint32_t step, std::uint32_t component,
                       Domain domain = Domain::driver_noise);

/// Uniform draw on {0, ..., n-1} with the same keying scheme.
std::uint32_t uniform_index(std::uint64_t seed, std::uint32_t stream, std::uint32_t replicate,
                            std::uint32_t step, std::uint32_t n,
                            Domain domain = Domain::control_policy);

} // namespace rng
} // namespace gsde
