#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace netdof {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Substream derivation: every randomized operation hashes (master seed, tags)
// into its own engine seed, so results never depend on scheduling or on how
// many draws another operation consumed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return h;
}

// Stream tags for the operations that draw randomness from a user seed.
inline constexpr std::uint64_t kStreamCoefficients = 0x636f6566;  // network coefficients
inline constexpr std::uint64_t kStreamLift = 0x6c696674;          // field coefficient draws
inline constexpr std::uint64_t kStreamRelays = 0x72656c79;        // relay matrix draws
inline constexpr std::uint64_t kStreamOutage = 0x6f757467;        // outage trial blocks
inline constexpr std::uint64_t kStreamVerify = 0x76726679;        // verification sampling

// Circularly-symmetric complex gaussian, zero mean, unit variance:
// independent N(0, 1/2) real and imaginary parts.
struct ComplexGaussian {
    std::normal_distribution<double> n{0.0, 0.7071067811865476};

    std::complex<double> operator()(std::mt19937_64& g) {
        double re = n(g);
        double im = n(g);
        return {re, im};
    }
};

} // namespace netdof
