#include "mfp/errors.hpp"
#include "mfp/estimator.hpp"
#include "mfp/fingerprint.hpp"
#include "mfp/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace mfp;

namespace {

std::vector<ItemId> random_stream(std::size_t n, std::uint64_t universe, Engine &engine) {
    std::vector<ItemId> out(n);
    for (auto &x : out) {
        x = uniform_below(engine, universe);
    }
    return out;
}

// Rows updated by the fast path must carry the naive minimum; rows it skipped must have a naive
// minimum at or above t.
void check_against_naive(const BlockState &fast, const BlockState &naive, FieldElement t) {
    REQUIRE(fast.rows() == naive.rows());
    for (std::size_t i = 0; i < fast.rows(); ++i) {
        if (fast.updated[i]) {
            CHECK(fast.min_values[i] == naive.min_values[i]);
            CHECK(fast.min_items[i] == naive.min_items[i]);
        } else {
            CHECK(naive.min_values[i] >= t);
        }
    }
}

} // namespace

TEST_SUITE("fingerprint") {

TEST_CASE("threshold_for") {
    const FieldParams m61;
    const auto p10007 = FieldParams::for_prime(10007);
    CHECK(threshold_for(1, 87, m61) == m61.prime());
    CHECK(threshold_for(12 * 87, 87, m61) == m61.prime());
    CHECK(threshold_for(12 * 87 + 1, 87, m61) < m61.prime());
    CHECK(threshold_for(10000, 87, p10007) == 1045);
    const FieldElement t = threshold_for(1000000, 87, m61);
    CHECK(t == 2407300101619097ULL);
    CHECK(static_cast<double>(t) * 1e6 / static_cast<double>(m61.prime()) == doctest::Approx(1044.0).epsilon(1e-9));
    CHECK_THROWS_AS(threshold_for(0, 87, m61), ArgumentError);
}

TEST_CASE("block_update on a single element with t = p fills every row") {
    const FieldParams params;
    const PolynomialPair pair = sample_base_pair(5, FamilyConfig{4, 0.01, params});
    const std::vector<ItemId> stream{123456789};
    const BlockState state = block_update(stream, pair, 50, params.prime(), params);
    const PairValue ab = eval_pair(pair, stream[0], params);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(state.updated[i]);
        CHECK(state.min_items[i] == stream[0]);
        CHECK(state.min_values[i] == composed_hash(ab.a, ab.b, i, params));
    }
}

TEST_CASE("block_update with t = 0 updates nothing") {
    const FieldParams params;
    Engine engine(6);
    const auto stream = random_stream(100, params.universe(), engine);
    const BlockState state = block_update(stream, sample_base_pair(6, FamilyConfig{4, 0.01, params}), 32, 0, params);
    CHECK_FALSE(state.all_updated());
    for (std::size_t i = 0; i < state.rows(); ++i) {
        CHECK_FALSE(state.updated[i]);
        CHECK(state.min_values[i] == params.prime());
    }
}

TEST_CASE("block_update with t = p equals the naive block (b = 200, k = 64, p = 10007, d = 4)") {
    const auto params = FieldParams::for_prime(10007);
    Engine engine(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto stream = random_stream(200, params.universe(), engine);
        const PolynomialPair pair = sample_base_pair(engine(), FamilyConfig{4, 0.01, params});
        CHECK(block_update(stream, pair, 64, params.prime(), params) == naive_minhash_block(stream, pair, 64, params));
    }
}

TEST_CASE("ties keep the smaller item in both paths") {
    const auto params = FieldParams::for_prime(101);
    const PolynomialPair flat{{3}, {0}, 0};
    const std::vector<ItemId> stream{50, 20, 40, 20, 99};
    const BlockState fast = block_update(stream, flat, 10, params.prime(), params);
    const BlockState naive = naive_minhash_block(stream, flat, 10, params);
    CHECK(fast == naive);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(fast.min_items[i] == 20);
    }
}

TEST_CASE("fast and naive agree on updated rows below the sketch threshold") {
    Engine engine(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t p = trial % 2 ? FieldParams::kMersenne61 : FieldParams::kMersenne31;
        const auto params = FieldParams::for_prime(p);
        const auto stream = random_stream(1 + uniform_below(engine, 1000), params.universe(), engine);
        const std::uint64_t k = 1 + uniform_below(engine, 256);
        const PolynomialPair pair = sample_base_pair(engine(), FamilyConfig{6, 0.01, params});
        const FieldElement t = threshold_for(stream.size(), 2, params);
        check_against_naive(block_update(stream, pair, k, t, params), naive_minhash_block(stream, pair, k, params), t);
    }
}

TEST_CASE("build_fingerprint basics") {
    const SketchConfig config = sketch_config_for(0.25, 0.25, 11);
    Engine engine(9);
    const auto stream = random_stream(300, config.params.universe(), engine);
    const Fingerprint a = build_fingerprint(stream, config);
    CHECK(a == build_fingerprint(stream, config));
    CHECK(a.blocks.size() == config.m);
    CHECK(a.element_count == 300);
    // 300 <= 12 * l' forces t = p, so every row is always updated.
    CHECK(a.valid_blocks() == config.m);
    for (std::size_t r = 0; r < a.blocks.size(); ++r) {
        CHECK(a.blocks[r].pair_seed == block_pair_seed(config, r));
        CHECK(a.blocks[r].bit_seed == block_bit_seed(config, r));
    }
    CHECK_THROWS_AS(build_fingerprint(std::vector<ItemId>{}, config), ArgumentError);
    SketchConfig other = config;
    other.master_seed = 12;
    CHECK(build_fingerprint(stream, other) != a);
}

TEST_CASE("bits are phi of the naive argmin for each row") {
    SketchConfig config = sketch_config_for(0.25, 0.25, 13);
    config.d = 5;
    Engine engine(10);
    const auto stream = random_stream(400, config.params.universe(), engine);
    const Fingerprint fp = build_fingerprint(stream, config);
    for (std::size_t r = 0; r < config.m; ++r) {
        const BlockState naive = naive_minhash_block(stream, block_pair(config, r), config.k, config.params);
        const auto phis = block_bit_hashes(config, r);
        for (std::size_t i = 0; i < config.k; ++i) {
            CHECK(fp.blocks[r].bit(i) == apply_bit_hash(phis[i], naive.min_items[i], config.params));
        }
    }
}

TEST_CASE("all blocks stay valid at b = 2000, epsilon = 0.25, delta = 0.1 over 100 seeds") {
    std::size_t invalid = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SketchConfig config = sketch_config_for(0.25, 0.1, seed);
        const auto stream = random_distinct_items(2000, seed + 1000, config.params.universe());
        const Fingerprint fp = build_fingerprint(stream, config);
        invalid += config.m - fp.valid_blocks();
    }
    CHECK(invalid == 0);
}

TEST_CASE("sub-threshold work concentrates: Y > 11 E[Y] in under 5% of blocks") {
    const double epsilon = 0.25;
    const auto level = degree_for_accuracy(epsilon);
    const auto k = params_for(epsilon, 0.1).k;
    const FieldParams params;
    const double expected = 12.0 * level.l_prime * k;
    int heavy = 0;
    double total = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const auto stream = random_distinct_items(3000, 500 + trial, params.universe());
        const PolynomialPair pair = sample_base_pair(trial, FamilyConfig{level.degree, epsilon / 1024, params});
        WorkCounters counters;
        block_update(stream, pair, k, threshold_for(stream.size(), level.l_prime, params), params, &counters);
        heavy += static_cast<double>(counters.emitted_cells) > 11 * expected;
        total += static_cast<double>(counters.emitted_cells);
    }
    CHECK(heavy < trials / 20);
    // The mean tracks E[Y] = t*b*k/p = 12 l' k closely.
    CHECK(total / trials == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("streaming: a stream that ends inside the buffer matches the known-length build") {
    const SketchConfig config = sketch_config_for(0.25, 0.1, 14);
    Engine engine(11);
    const auto stream = random_stream(30, config.params.universe(), engine);
    REQUIRE(stream.size() < streaming_buffer_size(config.epsilon, config.delta));
    CHECK(build_fingerprint_streaming(stream, config) == build_fingerprint(stream, config));
    CHECK_THROWS_AS(build_fingerprint_streaming(std::vector<ItemId>{}, config), ArgumentError);
}

TEST_CASE("streaming: two threshold epochs still produce exact row minima") {
    SketchConfig config = sketch_config_for(0.25, 0.1, 15);
    config.d = 4;
    config.l_prime = 2; // small enough that the thresholds fall below p at these lengths
    const std::uint64_t n0 = streaming_buffer_size(config.epsilon, config.delta);
    CHECK(n0 == 54);
    const auto stream = random_distinct_items(4 * n0, 77, config.params.universe());

    WorkCounters counters;
    StreamingBuilder builder(config, &counters);
    for (ItemId x : stream) {
        builder.add(x);
    }
    const Fingerprint fp = builder.finish();
    CHECK(builder.epochs() == 2);
    CHECK(builder.length_estimate() == 4 * n0);
    CHECK(builder.threshold() == threshold_for(4 * n0, config));
    CHECK(builder.threshold() < config.params.prime());
    CHECK(fp.element_count == stream.size());
    CHECK(fp.valid_blocks() == config.m);
    for (std::size_t r = 0; r < config.m; ++r) {
        const BlockState naive = naive_minhash_block(stream, block_pair(config, r), config.k, config.params);
        CHECK(builder.states()[r].min_values == naive.min_values);
        CHECK(builder.states()[r].min_items == naive.min_items);
    }
}

TEST_CASE("streaming and known-length paths agree on rows valid in both") {
    SketchConfig config = sketch_config_for(0.25, 0.1, 16);
    config.d = 6;
    config.l_prime = 3;
    const auto stream = random_distinct_items(3000, 78, config.params.universe());

    StreamingBuilder builder(config);
    for (ItemId x : stream) {
        builder.add(x);
    }
    builder.finish();
    CHECK(builder.epochs() > 1);
    const FieldElement t = threshold_for(stream.size(), config);
    std::size_t compared = 0;
    for (std::size_t r = 0; r < config.m; ++r) {
        const BlockState known = block_update(stream, block_pair(config, r), config.k, t, config.params);
        const BlockState &streamed = builder.states()[r];
        for (std::size_t i = 0; i < config.k; ++i) {
            if (known.updated[i] && streamed.updated[i]) {
                CHECK(known.min_values[i] == streamed.min_values[i]);
                CHECK(known.min_items[i] == streamed.min_items[i]);
                ++compared;
            }
        }
    }
    CHECK(compared > config.m * config.k / 2);
}

TEST_CASE("out-of-universe items are rejected") {
    const SketchConfig config = sketch_config_for(0.25, 0.25, 1, FieldParams::for_prime(101));
    CHECK_THROWS_AS(build_fingerprint(std::vector<ItemId>{1, 2, 100}, config), ArgumentError);
    StreamingBuilder builder(config);
    CHECK_THROWS_AS(builder.add(100), ArgumentError);
}

} // TEST_SUITE
