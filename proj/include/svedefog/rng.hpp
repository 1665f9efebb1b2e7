// rng.hpp - counter-based deterministic random primitives.
//
// Every draw is a pure function of (seed, coordinates, stream), so tiled or
// parallel evaluation cannot reorder the noise and identical seeds reproduce
// bit-identical outputs across runs and platforms.

#pragma once

#include <cmath>
#include <cstdint>

namespace svedefog {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t a, uint64_t b, uint64_t c = 0) {
    uint64_t h = splitmix64(seed ^ 0xA2B5C871D3E4F509ULL);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// Uniform in [0,1) from 53 high bits.
inline double to_unit(uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double hash_uniform(uint64_t seed, uint64_t a, uint64_t b, uint64_t c = 0) {
    return to_unit(hash_combine(seed, a, b, c));
}

// Standard normal via Box-Muller on two hashed uniforms.
inline double hash_gauss(uint64_t seed, uint64_t a, uint64_t b, uint64_t stream = 0) {
    const uint64_t h1 = hash_combine(seed, a, b, 2 * stream);
    const uint64_t h2 = hash_combine(seed, a, b, 2 * stream + 1);
    double u1 = to_unit(h1);
    const double u2 = to_unit(h2);
    if (u1 < 1e-300) u1 = 1e-300;  // avoid log(0)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace svedefog
