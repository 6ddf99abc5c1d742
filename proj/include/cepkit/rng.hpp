#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace cepkit {

// Counter-based random streams (Philox 2x64-10, Salmon et al. 2011).
// Every draw is a pure function of (key, counter), so simulations can
// evaluate paths in any order, on any number of workers, and still
// produce bit-identical results.

namespace rng {

inline std::pair<std::uint64_t, std::uint64_t> philox2x64(std::uint64_t c0, std::uint64_t c1,
                                                          std::uint64_t key) {
    constexpr std::uint64_t kMul = 0xD2B74407B1CE6E93ULL;
    constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
    for (int round = 0; round < 10; ++round) {
        unsigned __int128 prod = static_cast<unsigned __int128>(kMul) * c0;
        std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
        std::uint64_t lo = static_cast<std::uint64_t>(prod);
        c0 = hi ^ key ^ c1;
        c1 = lo;
        key += kWeyl;
    }
    return {c0, c1};
}

/// Map 64 random bits to (0, 1]; never returns 0 so log() is safe.
inline double to_open_unit(std::uint64_t x) { return static_cast<double>((x >> 11) + 1) * 0x1.0p-53; }

/// Map 64 random bits to [0, 1).
inline double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Uniform [0,1) draw identified by (seed, stream, idx0, idx1).
/// `stream` occupies the high 16 bits of the second counter word;
/// idx1 must stay below 2^48.
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t idx0,
                      std::uint64_t idx1) {
    auto [a, b] = philox2x64(idx0, (stream << 48) | (idx1 & 0xFFFFFFFFFFFFULL), seed);
    (void)b;
    return to_unit(a);
}

/// Standard normal draw identified by (seed, stream, idx0, idx1); Box-Muller.
inline double gauss(std::uint64_t seed, std::uint64_t stream, std::uint64_t idx0,
                    std::uint64_t idx1) {
    auto [a, b] = philox2x64(idx0, (stream << 48) | (idx1 & 0xFFFFFFFFFFFFULL), seed);
    double u1 = to_open_unit(a);
    double u2 = to_unit(b);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

/// Both Box-Muller outputs when a pair is needed.
inline std::pair<double, double> gauss_pair(std::uint64_t seed, std::uint64_t stream,
                                            std::uint64_t idx0, std::uint64_t idx1) {
    auto [a, b] = philox2x64(idx0, (stream << 48) | (idx1 & 0xFFFFFFFFFFFFULL), seed);
    double r = std::sqrt(-2.0 * std::log(to_open_unit(a)));
    double theta = 6.283185307179586477 * to_unit(b);
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace rng

}  // namespace cepkit
