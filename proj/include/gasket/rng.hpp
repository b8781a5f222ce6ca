#pragma once

#include <cmath>
#include <cstdint>

namespace gasket::rng {

// Counter-based generator: every variate is a pure function of (key, counter),
// so samples are reproducible regardless of evaluation order or threading.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter) {
    return splitmix64(key ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

/// Uniform in (0,1): top 53 bits, offset by half an ulp so 0 never occurs.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal from counters (2i, 2i+1) under the given key (Box-Muller).
inline double gaussian(std::uint64_t key, std::uint64_t i) {
    const double u1 = uniform01(counter_bits(key, 2 * i));
    const double u2 = uniform01(counter_bits(key, 2 * i + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Key for the Gaussian coefficients W_i of a field at a given level.
/// Deliberately independent of s: fields at different s but equal (seed, level)
/// share the same underlying W_i (coupled realizations).
inline std::uint64_t field_key(std::uint64_t seed, int level) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(level) + 0x51ed270b9f112f60ULL));
}

/// Derived key for auxiliary draws (pair subsampling, ensemble indexing).
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

}  // namespace gasket::rng
