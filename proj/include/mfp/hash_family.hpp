#pragma once

#include "mfp/modular.hpp"
#include "mfp/rng.hpp"
#include "mfp/work_counters.hpp"

#include <cstdint>
#include <vector>

namespace mfp {

/// Independence level l' and the polynomial degree d = l' + 1 that provides it.
struct IndependenceLevel {
    std::uint32_t l_prime;
    std::uint32_t degree;
};

/// l' = ceil(80 + 2*log2(1/epsilon)), d = l' + 1. Throws ArgumentError unless 0 < epsilon < 1.
IndependenceLevel degree_for_accuracy(double epsilon);

/// gamma = epsilon / 2^10, the min-wise approximation the block analysis needs.
double gamma_for_accuracy(double epsilon);

struct FamilyConfig {
    std::uint32_t degree;
    double gamma;
    FieldParams params;

    /// Full-strength family for a target sketch accuracy.
    static FamilyConfig for_accuracy(double epsilon, const FieldParams &params = {});

    /// Throws ArgumentError unless degree >= 1 and 0 < gamma < 1.
    void validate() const;
};

/**
 * The base random construction: two independent uniformly random polynomials f and g of degree d
 * over Z_p. The composed hashes h_i(x) = f(x) + i*g(x) all derive from this single pair.
 */
struct PolynomialPair {
    std::vector<FieldElement> f_coeffs; // a_0 .. a_d
    std::vector<FieldElement> g_coeffs; // b_0 .. b_d
    std::uint64_t seed = 0;

    std::uint32_t degree() const noexcept {
        return static_cast<std::uint32_t>(f_coeffs.size()) - 1;
    }

    bool operator==(const PolynomialPair &) const = default;
};

/// Draws 2(d+1) coefficients uniformly from [0, p): all of f, then all of g, from Engine(seed).
PolynomialPair sample_base_pair(std::uint64_t seed, const FamilyConfig &config);

/// (f(x), g(x)) for one item.
struct PairValue {
    FieldElement a;
    FieldElement b;

    bool operator==(const PairValue &) const = default;
};

/// Throws ArgumentError if x >= u.
PairValue eval_pair(const PolynomialPair &pair, ItemId x, const FieldParams &params, WorkCounters *counters = nullptr);

/// h_i = (a + i*b) mod p.
inline FieldElement composed_hash(FieldElement a, FieldElement b, std::uint64_t i, const FieldParams &params) noexcept {
    return params.add(a, params.mul(b, params.reduce(i)));
}

/// One-bit hash phi(x) = low bit of ((c0 + c1*x) mod p). The affine map is 2-independent over
/// Z_p; taking its parity leaves a bias of at most 1/p.
struct BitHash {
    FieldElement c0 = 0;
    FieldElement c1 = 1;

    bool operator==(const BitHash &) const = default;
};

/// Throws ArgumentError if x >= u.
unsigned apply_bit_hash(const BitHash &bh, ItemId x, const FieldParams &params);

/// c0 uniform in [0, p), c1 uniform in [1, p).
BitHash sample_bit_hash(Engine &engine, const FieldParams &params);

/// One independent bit hash per row, drawn in row order from Engine(seed).
std::vector<BitHash> sample_bit_hashes(std::uint64_t seed, std::size_t count, const FieldParams &params);

} // namespace mfp
