#pragma once

#include <cmath>
#include <cstdint>

namespace bandlab::rng {

// Counter-based generator: every variate is a pure function of its key, so
// entries can be produced in any order (or in parallel) with identical bits.

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t x) {
    return mix64(h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

template <typename... Words>
std::uint64_t key_hash(std::uint64_t seed, Words... words) {
    std::uint64_t h = mix64(seed);
    ((h = combine(h, static_cast<std::uint64_t>(words))), ...);
    return h;
}

inline std::uint64_t stream_word(std::uint64_t key, std::uint64_t index) {
    return mix64(key + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double gaussian(std::uint64_t key) {
    double u1 = uniform01(stream_word(key, 0));
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = uniform01(stream_word(key, 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline double rademacher(std::uint64_t key) {
    return (stream_word(key, 0) >> 63) ? 1.0 : -1.0;
}

// Uniform on [-sqrt(3), sqrt(3)]: unit variance.
inline double uniform_scaled(std::uint64_t key) {
    return (2.0 * uniform01(stream_word(key, 0)) - 1.0) * 1.7320508075688772935274463415059;
}

}  // namespace bandlab::rng
