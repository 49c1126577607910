#pragma once

#include "mfp/fingerprint.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mfp {

/// Parameters implied by an (epsilon, delta) accuracy target.
struct AccuracyParams {
    std::uint32_t k;       // ceil(8.02 / epsilon^2)
    std::uint32_t m;       // ceil(4 ln(1/delta)); tolerates dropped blocks
    double gamma;          // epsilon / 2^10
    std::uint32_t d;       // l_prime + 1
    std::uint32_t l_prime; // ceil(80 + 2 log2(1/epsilon))
};

/// Throws ArgumentError unless epsilon and delta lie in (0, 1).
AccuracyParams params_for(double epsilon, double delta);

/// Complete configuration for an accuracy target.
SketchConfig sketch_config_for(double epsilon, double delta, std::uint64_t master_seed,
                               const FieldParams &params = {});

/// Per-block agreement: c equal bits out of k, y = (2c - k) / k.
struct BlockEstimate {
    std::uint32_t collisions;
    double y;
};

/// Throws IncompatibleError if the blocks come from different seeds or k. Returns nullopt (skip)
/// when either block is invalid.
std::optional<BlockEstimate> block_estimate(const FingerprintBlock &a, const FingerprintBlock &b, std::uint32_t k);

struct SimilarityEstimate {
    double j_hat = 0.0;       // median of raw; may be negative
    double j_clamped = 0.0;   // j_hat clamped to [0, 1]
    std::uint32_t used_blocks = 0;
    std::vector<double> raw;  // per-block y, in block order, for blocks valid in both

    /// Equal bit positions and compared positions summed over the used blocks.
    std::uint64_t agreeing_rows = 0;
    std::uint64_t compared_rows = 0;
};

/// Throws IncompatibleError naming the first differing field, or nothing when compatible.
void check_compatible(const Fingerprint &a, const Fingerprint &b);

/**
 * Median of per-block estimates over block indices valid in both fingerprints. An even count
 * takes the mean of the two central values.
 *
 * Throws IncompatibleError on mismatched configuration and EstimationError when no block index
 * is usable.
 */
SimilarityEstimate median_estimate(const Fingerprint &a, const Fingerprint &b);

/// Median of a non-empty list (mean of the central pair for even sizes).
double median_of(std::vector<double> values);

} // namespace mfp
