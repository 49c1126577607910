#pragma once

#include "mfp/hash_family.hpp"
#include "mfp/modular.hpp"
#include "mfp/progression_scan.hpp"
#include "mfp/work_counters.hpp"

#include <cstdint>
#include <ranges>
#include <span>
#include <vector>

namespace mfp {

/**
 * Everything needed to build, and later compare, a fingerprint.
 *
 * sketch_config_for() (estimator.hpp) derives k, m, d, l_prime and gamma from (epsilon, delta).
 * The fields stay individually settable so tests and benchmarks can shrink d or k; validate()
 * only checks structural invariants.
 */
struct SketchConfig {
    double epsilon = 0.1;
    double delta = 0.1;
    std::uint32_t k = 1;       // hashes (rows) per block
    std::uint32_t m = 1;       // blocks
    std::uint32_t d = 1;       // polynomial degree
    std::uint32_t l_prime = 1; // independence level used by the threshold
    double gamma = 0.1 / 1024;
    FieldParams params;
    std::uint64_t master_seed = 0;

    FamilyConfig family() const {
        return {d, gamma, params};
    }

    /// Throws ArgumentError on out-of-range fields.
    void validate() const;

    bool operator==(const SketchConfig &) const = default;
};

/// Row minima of one block. min_values[i] == p marks a row that has not seen a value yet.
struct BlockState {
    std::vector<FieldElement> min_values;
    std::vector<ItemId> min_items;
    std::vector<bool> updated;

    BlockState() = default;
    BlockState(std::size_t k, FieldElement sentinel) : min_values(k, sentinel), min_items(k, 0), updated(k, false) {
    }

    std::size_t rows() const noexcept {
        return min_values.size();
    }

    bool all_updated() const noexcept;

    bool operator==(const BlockState &) const = default;
};

/// k single-bit slots: bit i is phi_i(argmin of row i). Bits are meaningful only when valid.
struct FingerprintBlock {
    std::vector<std::uint64_t> words; // row i at word i/64, bit i%64; unused high bits are zero
    bool valid = false;
    std::uint64_t pair_seed = 0;
    std::uint64_t bit_seed = 0;

    unsigned bit(std::size_t row) const noexcept {
        return static_cast<unsigned>((words[row / 64] >> (row % 64)) & 1u);
    }

    bool operator==(const FingerprintBlock &) const = default;
};

struct Fingerprint {
    SketchConfig config;
    std::vector<FingerprintBlock> blocks;
    std::uint64_t element_count = 0;

    std::size_t valid_blocks() const noexcept;

    bool operator==(const Fingerprint &) const = default;
};

/// t = min(p, ceil(12 * p * l_prime / b)), exact in 128-bit arithmetic. Throws ArgumentError if b == 0.
FieldElement threshold_for(std::uint64_t b, std::uint32_t l_prime, const FieldParams &params);

inline FieldElement threshold_for(std::uint64_t b, const SketchConfig &config) {
    return threshold_for(b, config.l_prime, config.params);
}

std::uint64_t block_pair_seed(const SketchConfig &config, std::size_t block) noexcept;
std::uint64_t block_bit_seed(const SketchConfig &config, std::size_t block) noexcept;

/// The (f, g) pair behind block `block` of any fingerprint built from `config`.
PolynomialPair block_pair(const SketchConfig &config, std::size_t block);

/// Per-row bit hashes of block `block`.
std::vector<BitHash> block_bit_hashes(const SketchConfig &config, std::size_t block);

/**
 * Feeds one item through a block: evaluates (f(x), g(x)) once, scans the column for values below t
 * and lowers any row minimum it beats. Equal values keep the smaller item ID.
 *
 * `scratch` is reused between calls to avoid reallocating the hit list.
 */
void absorb_item(BlockState &state, ItemId x, const PolynomialPair &pair, FieldElement t, const FieldParams &params,
                 ScanResult &scratch, WorkCounters *counters = nullptr);

/// Marks a row updated exactly when its minimum is below t.
void mark_updated(BlockState &state, FieldElement t);

/**
 * Row minima for the whole stream, touching only cells below t. Afterwards every row whose true
 * minimum is below t holds that minimum and its item; the rest keep the sentinel p.
 * Throws ArgumentError if an item is outside the universe.
 */
BlockState block_update(std::span<const ItemId> stream, const PolynomialPair &pair, std::uint64_t k, FieldElement t,
                        const FieldParams &params, WorkCounters *counters = nullptr);

/// Maps each updated row's argmin through that row's bit hash. Valid iff every row was updated.
FingerprintBlock finish_block(const BlockState &state, const std::vector<BitHash> &bit_hashes,
                              std::uint64_t pair_seed, std::uint64_t bit_seed, const FieldParams &params);

/// Known-length construction. Throws ArgumentError for an empty stream.
Fingerprint build_fingerprint(std::span<const ItemId> stream, const SketchConfig &config,
                              WorkCounters *counters = nullptr);

/**
 * One-pass construction for a stream of unknown length.
 *
 * The first ceil(log2(1/delta) / epsilon^2) items are buffered. Once the buffer fills, the length
 * estimate b is set to twice its size and processing switches to the threshold for b; every time
 * the item count passes b, b doubles and the threshold shrinks. A row's stored minimum is exact
 * when it lies below the final (smallest) threshold, so validity is judged against that one.
 * If the stream ends while still buffering, its length is known and the result equals
 * build_fingerprint.
 */
class StreamingBuilder {
public:
    explicit StreamingBuilder(const SketchConfig &config, WorkCounters *counters = nullptr);

    /// Throws ArgumentError if x is outside the universe.
    void add(ItemId x);

    /// Throws ArgumentError if no item was added.
    Fingerprint finish();

    std::uint64_t count() const noexcept {
        return count_;
    }
    std::uint64_t buffer_limit() const noexcept {
        return buffer_limit_;
    }
    /// Current length estimate; zero while buffering.
    std::uint64_t length_estimate() const noexcept {
        return b_;
    }
    FieldElement threshold() const noexcept {
        return t_;
    }
    /// Number of distinct thresholds used so far.
    std::uint32_t epochs() const noexcept {
        return epochs_;
    }
    const std::vector<BlockState> &states() const noexcept {
        return states_;
    }

private:
    void absorb_all(ItemId x);

    SketchConfig config_;
    WorkCounters *counters_;
    std::vector<PolynomialPair> pairs_;
    std::vector<BlockState> states_;
    std::vector<ItemId> buffer_;
    ScanResult scratch_;
    std::uint64_t buffer_limit_;
    std::uint64_t count_ = 0;
    std::uint64_t b_ = 0;
    FieldElement t_ = 0;
    std::uint32_t epochs_ = 0;
    bool buffering_ = true;
};

/// ceil(log2(1/delta) / epsilon^2), at least 1.
std::uint64_t streaming_buffer_size(double epsilon, double delta);

template <std::ranges::input_range R>
Fingerprint build_fingerprint_streaming(R &&items, const SketchConfig &config, WorkCounters *counters = nullptr) {
    StreamingBuilder builder(config, counters);
    for (auto &&x : items) {
        builder.add(static_cast<ItemId>(x));
    }
    return builder.finish();
}

} // namespace mfp
