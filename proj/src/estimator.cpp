#include "mfp/estimator.hpp"

#include "mfp/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace mfp {

AccuracyParams params_for(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ArgumentError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ArgumentError("delta must lie in (0, 1), got " + std::to_string(delta));
    }
    const IndependenceLevel level = degree_for_accuracy(epsilon);
    AccuracyParams out{};
    out.k = static_cast<std::uint32_t>(std::ceil(8.02 / (epsilon * epsilon) - 1e-9));
    out.m = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(4.0 * std::log(1.0 / delta) - 1e-9)));
    out.gamma = gamma_for_accuracy(epsilon);
    out.d = level.degree;
    out.l_prime = level.l_prime;
    return out;
}

SketchConfig sketch_config_for(double epsilon, double delta, std::uint64_t master_seed, const FieldParams &params) {
    const AccuracyParams ap = params_for(epsilon, delta);
    SketchConfig c;
    c.epsilon = epsilon;
    c.delta = delta;
    c.k = ap.k;
    c.m = ap.m;
    c.d = ap.d;
    c.l_prime = ap.l_prime;
    c.gamma = ap.gamma;
    c.params = params;
    c.master_seed = master_seed;
    return c;
}

std::optional<BlockEstimate> block_estimate(const FingerprintBlock &a, const FingerprintBlock &b, std::uint32_t k) {
    if (a.pair_seed != b.pair_seed) {
        throw IncompatibleError("pair_seed", std::to_string(a.pair_seed) + " vs " + std::to_string(b.pair_seed));
    }
    if (a.bit_seed != b.bit_seed) {
        throw IncompatibleError("bit_seed", std::to_string(a.bit_seed) + " vs " + std::to_string(b.bit_seed));
    }
    const std::size_t words = (static_cast<std::size_t>(k) + 63) / 64;
    if (a.words.size() != words || b.words.size() != words) {
        throw IncompatibleError("k", "block bit arrays do not hold " + std::to_string(k) + " rows");
    }
    if (!a.valid || !b.valid) {
        return std::nullopt;
    }
    std::uint32_t differing = 0;
    for (std::size_t w = 0; w < words; ++w) {
        differing += static_cast<std::uint32_t>(std::popcount(a.words[w] ^ b.words[w]));
    }
    const std::uint32_t c = k - differing;
    return BlockEstimate{c, (2.0 * c - k) / k};
}

void check_compatible(const Fingerprint &a, const Fingerprint &b) {
    const SketchConfig &x = a.config;
    const SketchConfig &y = b.config;
    auto require = [](bool same, const char *field, auto lhs, auto rhs) {
        if (!same) {
            throw IncompatibleError(field, std::to_string(lhs) + " vs " + std::to_string(rhs));
        }
    };
    require(x.master_seed == y.master_seed, "master_seed", x.master_seed, y.master_seed);
    require(x.params.prime() == y.params.prime(), "prime", x.params.prime(), y.params.prime());
    require(x.params.universe() == y.params.universe(), "universe", x.params.universe(), y.params.universe());
    require(x.k == y.k, "k", x.k, y.k);
    require(x.m == y.m, "m", x.m, y.m);
    require(x.d == y.d, "d", x.d, y.d);
    require(x.epsilon == y.epsilon, "epsilon", x.epsilon, y.epsilon);
    require(x.delta == y.delta, "delta", x.delta, y.delta);
    require(a.blocks.size() == b.blocks.size(), "block_count", a.blocks.size(), b.blocks.size());
}

double median_of(std::vector<double> values) {
    if (values.empty()) {
        throw EstimationError("median of an empty list");
    }
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), mid);
    return (lower + upper) / 2.0;
}

SimilarityEstimate median_estimate(const Fingerprint &a, const Fingerprint &b) {
    check_compatible(a, b);
    SimilarityEstimate est;
    const std::uint32_t k = a.config.k;
    for (std::size_t r = 0; r < a.blocks.size(); ++r) {
        const auto block = block_estimate(a.blocks[r], b.blocks[r], k);
        if (!block) {
            continue;
        }
        est.raw.push_back(block->y);
        est.agreeing_rows += block->collisions;
        est.compared_rows += k;
    }
    if (est.raw.empty()) {
        throw EstimationError("no block is valid in both fingerprints");
    }
    est.used_blocks = static_cast<std::uint32_t>(est.raw.size());
    est.j_hat = median_of(est.raw);
    est.j_clamped = std::clamp(est.j_hat, 0.0, 1.0);
    return est;
}

} // namespace mfp
