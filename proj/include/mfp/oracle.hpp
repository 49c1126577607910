#pragma once

// Slow reference implementations. They favor obviousness over speed and back the tests, the
// benchmark and the CLI's self-test.

#include "mfp/fingerprint.hpp"
#include "mfp/hash_family.hpp"
#include "mfp/work_counters.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mfp {

/// Distinct item IDs, kept sorted.
class ItemSet {
public:
    ItemSet() = default;
    explicit ItemSet(std::span<const ItemId> items);
    ItemSet(std::initializer_list<ItemId> items) : ItemSet(std::span<const ItemId>(items.begin(), items.size())) {
    }

    const std::vector<ItemId> &items() const noexcept {
        return items_;
    }
    std::size_t size() const noexcept {
        return items_.size();
    }
    bool empty() const noexcept {
        return items_.empty();
    }

    bool operator==(const ItemSet &) const = default;

private:
    std::vector<ItemId> items_;
};

/// |a n b| / |a u b|. Throws UndefinedSimilarityError when both sets are empty.
double exact_jaccard(const ItemSet &a, const ItemSet &b);

/**
 * Row minima by evaluating every h_i(x_j) directly: b*k composed-hash evaluations. Every row is
 * marked updated, and equal values keep the smaller item ID exactly as the fast path does.
 * Throws ArgumentError for an empty stream or an item outside the universe.
 */
BlockState naive_minhash_block(std::span<const ItemId> stream, const PolynomialPair &pair, std::uint64_t k,
                               const FieldParams &params, WorkCounters *counters = nullptr);

/// Two sets with a prescribed union and intersection size, drawn without replacement from [0, u).
struct SyntheticPair {
    std::vector<ItemId> a;
    std::vector<ItemId> b;
    double jaccard;
};

/**
 * |a u b| = union_size and |a n b| = intersection_size; the remaining items alternate between
 * a-only and b-only. Item order within each stream is shuffled.
 */
SyntheticPair make_jaccard_pair(std::size_t union_size, std::size_t intersection_size, std::uint64_t seed,
                                std::uint64_t universe);

/// `count` distinct items drawn uniformly from [0, universe).
std::vector<ItemId> random_distinct_items(std::size_t count, std::uint64_t seed, std::uint64_t universe);

} // namespace mfp
