#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace mfp {

/// A residue in [0, p).
using FieldElement = std::uint64_t;

/// An item identifier from the universe [0, u).
using ItemId = std::uint64_t;

__extension__ typedef unsigned __int128 u128;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

/// (a * b) mod m for any modulus m >= 1, via a 128-bit intermediate.
constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

/**
 * The prime field Z_p together with the item universe bound u.
 *
 * Invariants: p is prime, p < 2^63 (so a + b never overflows for residues), and 1 <= u < p.
 * Multiplication by 2^61 - 1 takes the Mersenne folding path; every other prime uses a
 * 128-bit product and a hardware remainder. Both are exact.
 */
class FieldParams {
public:
    static constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
    static constexpr std::uint64_t kMersenne31 = (std::uint64_t{1} << 31) - 1;

    /// p = 2^61 - 1, u = p - 1.
    FieldParams() noexcept : FieldParams(kMersenne61, kMersenne61 - 1, Unchecked{}) {
    }

    /// Throws ArgumentError unless p is a prime below 2^63 and 1 <= u < p.
    FieldParams(std::uint64_t p, std::uint64_t u);

    /// Largest universe the prime allows: u = p - 1.
    static FieldParams for_prime(std::uint64_t p) {
        return FieldParams(p, p - 1);
    }

    std::uint64_t prime() const noexcept {
        return p_;
    }
    std::uint64_t universe() const noexcept {
        return u_;
    }

    FieldElement reduce(std::uint64_t v) const noexcept {
        return v % p_;
    }

    FieldElement add(FieldElement a, FieldElement b) const noexcept {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }

    FieldElement sub(FieldElement a, FieldElement b) const noexcept {
        return a >= b ? a - b : a + (p_ - b);
    }

    FieldElement neg(FieldElement a) const noexcept {
        return a == 0 ? 0 : p_ - a;
    }

    FieldElement mul(FieldElement a, FieldElement b) const noexcept {
        if (p_ == kMersenne61) {
            u128 z = static_cast<u128>(a) * b;
            std::uint64_t r = (static_cast<std::uint64_t>(z) & kMersenne61) + static_cast<std::uint64_t>(z >> 61);
            return r >= kMersenne61 ? r - kMersenne61 : r;
        }
        return mul_mod(a, b, p_);
    }

    FieldElement pow(FieldElement base, std::uint64_t exp) const noexcept;

    bool operator==(const FieldParams &) const = default;

private:
    struct Unchecked {};
    constexpr FieldParams(std::uint64_t p, std::uint64_t u, Unchecked) noexcept : p_(p), u_(u) {
    }

    std::uint64_t p_;
    std::uint64_t u_;
};

/// Inverse of v modulo any m >= 2 by the extended Euclidean algorithm; nullopt when gcd(v, m) != 1.
/// Requires m < 2^63.
std::optional<std::uint64_t> try_inverse(std::uint64_t v, std::uint64_t m) noexcept;

/// Inverse of v in Z_p. Throws NoInverseError for v == 0 (mod p).
FieldElement mod_inverse(FieldElement v, const FieldParams &params);

/// sum coeffs[j] * x^j mod p by Horner's scheme. Throws ArgumentError on an empty coefficient list.
FieldElement poly_eval(std::span<const FieldElement> coeffs, FieldElement x, const FieldParams &params);

} // namespace mfp
