#include "mfp/hash_family.hpp"

#include "mfp/errors.hpp"

#include <cmath>
#include <string>

namespace mfp {

IndependenceLevel degree_for_accuracy(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ArgumentError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
    // The slack keeps exact powers of two (log2 of 4 is exactly 2) from rounding up.
    const double raw = 80.0 + 2.0 * std::log2(1.0 / epsilon);
    const auto l_prime = static_cast<std::uint32_t>(std::ceil(raw - 1e-9));
    return {l_prime, l_prime + 1};
}

double gamma_for_accuracy(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ArgumentError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
    return epsilon / 1024.0;
}

FamilyConfig FamilyConfig::for_accuracy(double epsilon, const FieldParams &params) {
    return {degree_for_accuracy(epsilon).degree, gamma_for_accuracy(epsilon), params};
}

void FamilyConfig::validate() const {
    if (degree < 1) {
        throw ArgumentError("polynomial degree must be at least 1");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ArgumentError("gamma must lie in (0, 1), got " + std::to_string(gamma));
    }
}

PolynomialPair sample_base_pair(std::uint64_t seed, const FamilyConfig &config) {
    config.validate();
    const std::uint64_t p = config.params.prime();
    Engine engine(seed);
    PolynomialPair pair;
    pair.seed = seed;
    pair.f_coeffs.resize(config.degree + 1);
    pair.g_coeffs.resize(config.degree + 1);
    for (auto &c : pair.f_coeffs) {
        c = uniform_below(engine, p);
    }
    for (auto &c : pair.g_coeffs) {
        c = uniform_below(engine, p);
    }
    return pair;
}

PairValue eval_pair(const PolynomialPair &pair, ItemId x, const FieldParams &params, WorkCounters *counters) {
    if (x >= params.universe()) {
        throw ArgumentError("item " + std::to_string(x) + " outside universe [0, " +
                            std::to_string(params.universe()) + ")");
    }
    if (counters) {
        ++counters->pair_evals;
    }
    return {poly_eval(pair.f_coeffs, x, params), poly_eval(pair.g_coeffs, x, params)};
}

unsigned apply_bit_hash(const BitHash &bh, ItemId x, const FieldParams &params) {
    if (x >= params.universe()) {
        throw ArgumentError("item " + std::to_string(x) + " outside universe [0, " +
                            std::to_string(params.universe()) + ")");
    }
    return static_cast<unsigned>(params.add(bh.c0, params.mul(bh.c1, x)) & 1u);
}

BitHash sample_bit_hash(Engine &engine, const FieldParams &params) {
    const std::uint64_t p = params.prime();
    BitHash bh;
    bh.c0 = uniform_below(engine, p);
    bh.c1 = 1 + uniform_below(engine, p - 1);
    return bh;
}

std::vector<BitHash> sample_bit_hashes(std::uint64_t seed, std::size_t count, const FieldParams &params) {
    Engine engine(seed);
    std::vector<BitHash> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(sample_bit_hash(engine, params));
    }
    return out;
}

} // namespace mfp
