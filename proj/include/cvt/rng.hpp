#pragma once

// Counter-based random streams: every draw is a pure function of
// (seed, stream, counter), so parallel and serial traversals of the sample
// index space produce identical values.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cvt {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform double in the open interval (0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
    std::uint64_t h = splitmix64(splitmix64(seed ^ splitmix64(stream)) + counter);
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Independent standard-normal pair via Box-Muller.
inline void counter_gaussian_pair(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter, double& z0, double& z1) {
    double u1 = counter_uniform(seed, stream, 2 * counter);
    double u2 = counter_uniform(seed, stream, 2 * counter + 1);
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
}

} // namespace cvt
