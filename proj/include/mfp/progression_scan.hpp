#pragma once

#include "mfp/modular.hpp"
#include "mfp/work_counters.hpp"

#include <cstdint>
#include <vector>

namespace mfp {

/**
 * The arithmetic progression S(a, b, k, p) = ((a + i*b) mod p for i in [0, k)) together with a
 * threshold t. For a single item x with a = f(x) and b = g(x), the progression is exactly the
 * column (h_0(x), ..., h_{k-1}(x)).
 */
struct ProgressionQuery {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t p = 2;
    std::uint64_t k = 1;
    std::uint64_t t = 0;

    /// Throws ArgumentError unless 2 <= p < 2^63, k >= 1, a < p, b < p and t <= p.
    void validate() const;
};

/// Positions i in [0, k) with (a + i*b) mod p < t, ascending, with their values.
struct ScanResult {
    std::vector<std::uint64_t> indices;
    std::vector<FieldElement> values;

    std::size_t size() const noexcept {
        return indices.size();
    }

    bool operator==(const ScanResult &) const = default;
};

/**
 * Flip locations of a progression and the progression their values form.
 *
 * A flip location is an index whose value wrapped past the modulus (s_i < s_{i-1}); index 0 counts
 * when a < b, since its predecessor (a - b) mod p would exceed it. For 0 < b < p the flip locations
 * are exactly the indices whose value is below b, and their values are the progression
 * S(a_prime, b_prime, k_prime, b) with b_prime = (-p) mod b.
 */
struct FlipProgression {
    std::uint64_t first_index = 0; // index of the first flip; meaningless when k_prime == 0
    std::uint64_t a_prime = 0;
    std::uint64_t b_prime = 0;
    std::uint64_t modulus = 0;
    std::uint64_t k_prime = 0;

    bool operator==(const FlipProgression &) const = default;
};

/// Throws DegenerateStepError if b == 0; the query must otherwise be valid.
FlipProgression flip_progression(const ProgressionQuery &q);

/**
 * Every value of the progression below t, as a multiset in unspecified order.
 *
 * Work is O(log k + output): each level either walks runs directly (when b < t), reverses a
 * progression whose step exceeds half the modulus, or descends to the flip progression, which has
 * at most half as many terms over a modulus at most half as large.
 */
std::vector<FieldElement> scan_values_below(const ProgressionQuery &q, WorkCounters *counters = nullptr);

/// Values below t with their indices, sorted by index. Indices are recovered from values with a
/// single inverse of b; p must be prime (or at least coprime to b). When k > p the progression is
/// periodic and each recovered index is repeated every p positions.
ScanResult scan_below_threshold(const ProgressionQuery &q, WorkCounters *counters = nullptr);

/// Same hits as scan_below_threshold, written into `out` (cleared first) in no particular order.
/// Reuses out's storage; used on the per-item hot path.
void scan_below_threshold_unordered(const ProgressionQuery &q, ScanResult &out, WorkCounters *counters = nullptr);

/// O(k) enumeration with the same output as scan_below_threshold. Reference for tests.
ScanResult brute_scan(const ProgressionQuery &q);

} // namespace mfp
