#pragma once

#include <cstdint>
#include <random>

namespace mfp {

/// Every random draw in the library comes from this engine. Its output sequence is fixed by the
/// C++ standard, so a seed reproduces the same coefficients on any conforming implementation.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class SeedPurpose : std::uint64_t {
    polynomial_pair = 0,
    bit_hash = 1,
};

/**
 * Sub-seed for one block and one purpose:
 *
 *     derive_seed(master, block, purpose) = mix64(master + 0x9e3779b97f4a7c15 * (2*block + purpose + 1))
 *
 * with wrap-around 64-bit arithmetic. Two fingerprints are comparable exactly when they were
 * built from the same master seed, since every per-block seed is a function of it.
 */
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t block, SeedPurpose purpose) noexcept {
    const std::uint64_t counter = 2 * block + static_cast<std::uint64_t>(purpose) + 1;
    return mix64(master + 0x9e3779b97f4a7c15ULL * counter);
}

/// Uniform draw from [0, bound) by masking to the next power of two and rejecting. bound >= 1.
inline std::uint64_t uniform_below(Engine &engine, std::uint64_t bound) {
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        std::uint64_t v = engine() & mask;
        if (v < bound) {
            return v;
        }
    }
}

} // namespace mfp
