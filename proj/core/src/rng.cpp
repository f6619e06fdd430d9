#include "gsde/rng.hpp"

#include <cmath>
#include <numbers>

namespace gsde {
namespace rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u; // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u; // sqrt(3) - 1

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b);
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& counter) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::array<std::uint32_t, 4> x = counter;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, x[0], hi0, lo0);
        mulhilo(kPhiloxM1, x[2], hi1, lo1);
        x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return x;
}

double uniform_open_closed(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double uniform_closed_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double standard_normal(std::uint64_t seed, std::uint32_t stream, std::uint32_t replicate,
                       std::uint32_t step, std::uint32_t component, Domain domain) {
    const std::uint32_t tag =
        (static_cast<std::uint32_t>(domain) << 24) ^ stream;
    const auto block = philox4x32(seed, {tag, replicate, step, component});
    // Box-Muller, cosine branch; one normal per block.
    const double u1 = uniform_open_closed(block[0], block[1]);
    const double u2 = uniform_closed_open(block[2], block[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint32_t uniform_index(std::uint64_t seed, std::uint32_t stream, std::uint32_t replicate,
                            std::uint32_t step, std::uint32_t n, Domain domain) {
    const std::uint32_t tag =
        (static_cast<std::uint32_t>(domain) << 24) ^ stream;
    const auto block = philox4x32(seed, {tag, replicate, step, 0xFFFFu});
    const std::uint64_t bits = (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
    return static_cast<std::uint32_t>(bits % n);
}

} // namespace rng
} // namespace gsde
