#include "mfp/oracle.hpp"

#include "mfp/errors.hpp"
#include "mfp/rng.hpp"

#include <algorithm>
#include <iterator>
#include <string>
#include <unordered_set>

namespace mfp {

ItemSet::ItemSet(std::span<const ItemId> items) : items_(items.begin(), items.end()) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

double exact_jaccard(const ItemSet &a, const ItemSet &b) {
    if (a.empty() && b.empty()) {
        throw UndefinedSimilarityError("Jaccard similarity of two empty sets is undefined");
    }
    std::vector<ItemId> common;
    std::set_intersection(a.items().begin(), a.items().end(), b.items().begin(), b.items().end(),
                          std::back_inserter(common));
    const std::size_t union_size = a.size() + b.size() - common.size();
    return static_cast<double>(common.size()) / static_cast<double>(union_size);
}

BlockState naive_minhash_block(std::span<const ItemId> stream, const PolynomialPair &pair, std::uint64_t k,
                               const FieldParams &params, WorkCounters *counters) {
    if (stream.empty()) {
        throw ArgumentError("naive_minhash_block: empty stream");
    }
    BlockState state(k, params.prime());
    for (ItemId x : stream) {
        const PairValue ab = eval_pair(pair, x, params, counters);
        for (std::uint64_t i = 0; i < k; ++i) {
            const FieldElement v = composed_hash(ab.a, ab.b, i, params);
            if (v < state.min_values[i] || (v == state.min_values[i] && x < state.min_items[i])) {
                state.min_values[i] = v;
                state.min_items[i] = x;
            }
        }
        if (counters) {
            counters->composed_evals += k;
        }
    }
    std::fill(state.updated.begin(), state.updated.end(), true);
    return state;
}

std::vector<ItemId> random_distinct_items(std::size_t count, std::uint64_t seed, std::uint64_t universe) {
    if (count > universe) {
        throw ArgumentError("cannot draw " + std::to_string(count) + " distinct items from a universe of " +
                            std::to_string(universe));
    }
    Engine engine(seed);
    std::unordered_set<ItemId> seen;
    std::vector<ItemId> out;
    out.reserve(count);
    while (out.size() < count) {
        const ItemId x = uniform_below(engine, universe);
        if (seen.insert(x).second) {
            out.push_back(x);
        }
    }
    return out;
}

SyntheticPair make_jaccard_pair(std::size_t union_size, std::size_t intersection_size, std::uint64_t seed,
                                std::uint64_t universe) {
    if (union_size == 0 || intersection_size > union_size) {
        throw ArgumentError("make_jaccard_pair: need 0 < union_size and intersection_size <= union_size");
    }
    const std::vector<ItemId> pool = random_distinct_items(union_size, seed, universe);
    SyntheticPair out;
    out.jaccard = static_cast<double>(intersection_size) / static_cast<double>(union_size);
    for (std::size_t j = 0; j < union_size; ++j) {
        if (j < intersection_size) {
            out.a.push_back(pool[j]);
            out.b.push_back(pool[j]);
        } else if ((j - intersection_size) % 2 == 0) {
            out.a.push_back(pool[j]);
        } else {
            out.b.push_back(pool[j]);
        }
    }
    Engine engine(mix64(seed ^ 0x5eed));
    std::shuffle(out.a.begin(), out.a.end(), engine);
    std::shuffle(out.b.begin(), out.b.end(), engine);
    return out;
}

} // namespace mfp
