#include "mfp/fingerprint.hpp"

#include "mfp/errors.hpp"
#include "mfp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mfp {

void SketchConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ArgumentError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ArgumentError("delta must lie in (0, 1), got " + std::to_string(delta));
    }
    if (k < 1 || m < 1 || d < 1 || l_prime < 1) {
        throw ArgumentError("k, m, d and l_prime must all be at least 1");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ArgumentError("gamma must lie in (0, 1), got " + std::to_string(gamma));
    }
}

bool BlockState::all_updated() const noexcept {
    return std::all_of(updated.begin(), updated.end(), [](bool u) { return u; });
}

std::size_t Fingerprint::valid_blocks() const noexcept {
    return static_cast<std::size_t>(std::count_if(blocks.begin(), blocks.end(), [](const auto &b) { return b.valid; }));
}

FieldElement threshold_for(std::uint64_t b, std::uint32_t l_prime, const FieldParams &params) {
    if (b == 0) {
        throw ArgumentError("threshold_for: stream length must be at least 1");
    }
    const u128 p = params.prime();
    const u128 numerator = 12 * p * l_prime;
    const u128 t = numerator / b + (numerator % b != 0);
    return t >= p ? params.prime() : static_cast<FieldElement>(t);
}

std::uint64_t block_pair_seed(const SketchConfig &config, std::size_t block) noexcept {
    return derive_seed(config.master_seed, block, SeedPurpose::polynomial_pair);
}

std::uint64_t block_bit_seed(const SketchConfig &config, std::size_t block) noexcept {
    return derive_seed(config.master_seed, block, SeedPurpose::bit_hash);
}

PolynomialPair block_pair(const SketchConfig &config, std::size_t block) {
    return sample_base_pair(block_pair_seed(config, block), config.family());
}

std::vector<BitHash> block_bit_hashes(const SketchConfig &config, std::size_t block) {
    return sample_bit_hashes(block_bit_seed(config, block), config.k, config.params);
}

void absorb_item(BlockState &state, ItemId x, const PolynomialPair &pair, FieldElement t, const FieldParams &params,
                 ScanResult &scratch, WorkCounters *counters) {
    const PairValue ab = eval_pair(pair, x, params, counters);
    const ProgressionQuery q{ab.a, ab.b, params.prime(), state.rows(), t};
    scan_below_threshold_unordered(q, scratch, counters);
    for (std::size_t j = 0; j < scratch.size(); ++j) {
        const std::uint64_t row = scratch.indices[j];
        const FieldElement v = scratch.values[j];
        FieldElement &best = state.min_values[row];
        if (v < best || (v == best && x < state.min_items[row])) {
            best = v;
            state.min_items[row] = x;
        }
    }
}

void mark_updated(BlockState &state, FieldElement t) {
    for (std::size_t i = 0; i < state.rows(); ++i) {
        state.updated[i] = state.min_values[i] < t;
    }
}

BlockState block_update(std::span<const ItemId> stream, const PolynomialPair &pair, std::uint64_t k, FieldElement t,
                        const FieldParams &params, WorkCounters *counters) {
    if (k < 1) {
        throw ArgumentError("block_update: k must be at least 1");
    }
    BlockState state(k, params.prime());
    ScanResult scratch;
    for (ItemId x : stream) {
        absorb_item(state, x, pair, t, params, scratch, counters);
    }
    mark_updated(state, t);
    return state;
}

FingerprintBlock finish_block(const BlockState &state, const std::vector<BitHash> &bit_hashes,
                              std::uint64_t pair_seed, std::uint64_t bit_seed, const FieldParams &params) {
    if (bit_hashes.size() != state.rows()) {
        throw ArgumentError("finish_block: one bit hash per row required");
    }
    FingerprintBlock block;
    block.pair_seed = pair_seed;
    block.bit_seed = bit_seed;
    block.words.assign((state.rows() + 63) / 64, 0);
    block.valid = true;
    for (std::size_t i = 0; i < state.rows(); ++i) {
        if (!state.updated[i]) {
            block.valid = false;
            continue;
        }
        const std::uint64_t bit = apply_bit_hash(bit_hashes[i], state.min_items[i], params);
        block.words[i / 64] |= bit << (i % 64);
    }
    return block;
}

Fingerprint build_fingerprint(std::span<const ItemId> stream, const SketchConfig &config, WorkCounters *counters) {
    config.validate();
    if (stream.empty()) {
        throw ArgumentError("cannot fingerprint an empty stream");
    }
    const FieldElement t = threshold_for(stream.size(), config);

    Fingerprint fp;
    fp.config = config;
    fp.element_count = stream.size();
    fp.blocks.reserve(config.m);
    for (std::size_t r = 0; r < config.m; ++r) {
        const std::uint64_t pair_seed = block_pair_seed(config, r);
        const std::uint64_t bit_seed = block_bit_seed(config, r);
        const PolynomialPair pair = sample_base_pair(pair_seed, config.family());
        const BlockState state = block_update(stream, pair, config.k, t, config.params, counters);
        fp.blocks.push_back(
            finish_block(state, sample_bit_hashes(bit_seed, config.k, config.params), pair_seed, bit_seed, config.params));
    }
    return fp;
}

std::uint64_t streaming_buffer_size(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw ArgumentError("epsilon and delta must lie in (0, 1)");
    }
    const double n = std::ceil(std::log2(1.0 / delta) / (epsilon * epsilon) - 1e-9);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

StreamingBuilder::StreamingBuilder(const SketchConfig &config, WorkCounters *counters)
    : config_(config), counters_(counters), buffer_limit_(streaming_buffer_size(config.epsilon, config.delta)) {
    config_.validate();
    pairs_.reserve(config_.m);
    states_.reserve(config_.m);
    for (std::size_t r = 0; r < config_.m; ++r) {
        pairs_.push_back(block_pair(config_, r));
        states_.emplace_back(config_.k, config_.params.prime());
    }
}

void StreamingBuilder::absorb_all(ItemId x) {
    for (std::size_t r = 0; r < states_.size(); ++r) {
        absorb_item(states_[r], x, pairs_[r], t_, config_.params, scratch_, counters_);
    }
}

void StreamingBuilder::add(ItemId x) {
    if (x >= config_.params.universe()) {
        throw ArgumentError("item " + std::to_string(x) + " outside universe [0, " +
                            std::to_string(config_.params.universe()) + ")");
    }
    ++count_;
    if (buffering_) {
        buffer_.push_back(x);
        if (buffer_.size() < buffer_limit_) {
            return;
        }
        buffering_ = false;
        b_ = 2 * buffer_limit_;
        t_ = threshold_for(b_, config_);
        epochs_ = 1;
        for (ItemId y : buffer_) {
            absorb_all(y);
        }
        buffer_.clear();
        buffer_.shrink_to_fit();
        return;
    }
    if (count_ > b_) {
        while (count_ > b_) {
            b_ *= 2;
        }
        t_ = threshold_for(b_, config_);
        ++epochs_;
    }
    absorb_all(x);
}

Fingerprint StreamingBuilder::finish() {
    if (count_ == 0) {
        throw ArgumentError("cannot fingerprint an empty stream");
    }
    if (buffering_) {
        buffering_ = false;
        b_ = count_;
        t_ = threshold_for(b_, config_);
        epochs_ = 1;
        for (ItemId y : buffer_) {
            absorb_all(y);
        }
        buffer_.clear();
    }

    Fingerprint fp;
    fp.config = config_;
    fp.element_count = count_;
    fp.blocks.reserve(states_.size());
    for (std::size_t r = 0; r < states_.size(); ++r) {
        mark_updated(states_[r], t_);
        const std::uint64_t bit_seed = block_bit_seed(config_, r);
        fp.blocks.push_back(finish_block(states_[r], sample_bit_hashes(bit_seed, config_.k, config_.params),
                                         pairs_[r].seed, bit_seed, config_.params));
    }
    return fp;
}

} // namespace mfp
