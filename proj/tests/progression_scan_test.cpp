#include "mfp/errors.hpp"
#include "mfp/progression_scan.hpp"
#include "mfp/selftest.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace mfp;

namespace {

std::vector<std::uint64_t> enumerate(const ProgressionQuery &q) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < q.k; ++i) {
        out.push_back(static_cast<std::uint64_t>((q.a + static_cast<u128>(i) * q.b) % q.p));
    }
    return out;
}

// Flip locations by definition: index 0 when a < b, otherwise any index whose value dropped.
std::vector<std::uint64_t> flip_indices(const ProgressionQuery &q) {
    const auto s = enumerate(q);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < q.k; ++i) {
        if ((i == 0 && q.a < q.b) || (i > 0 && s[i] < s[i - 1])) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::uint64_t> sorted(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_SUITE("progression_scan") {

TEST_CASE("flip_progression examples") {
    // 2,5,1,4,0: flips at 0, 2, 4 with values 2, 1, 0.
    CHECK(flip_progression({2, 3, 7, 5, 7}) == FlipProgression{0, 2, 2, 3, 3});
    // 1,4,0: flips at 0 and 2.
    CHECK(flip_progression({1, 3, 7, 3, 7}) == FlipProgression{0, 1, 2, 3, 2});
    // 0,1,2,3,4: only index 0.
    CHECK(flip_progression({0, 1, 7, 5, 7}) == FlipProgression{0, 0, 0, 1, 1});
    // 5,1,4,0,3: a >= b, so the first flip is at ceil((7 - 5) / 3) = 1.
    CHECK(flip_progression({5, 3, 7, 5, 7}) == FlipProgression{1, 1, 2, 3, 2});
    // 2,5,1,4: a wrap just past the last index is not counted.
    CHECK(flip_progression({2, 3, 7, 4, 7}).k_prime == 2);
    CHECK_THROWS_AS(flip_progression({2, 0, 7, 5, 7}), DegenerateStepError);
}

TEST_CASE("flip progression reproduces the enumerated flip values") {
    Engine engine(31);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::uint64_t p = test_primes()[static_cast<std::size_t>(trial) % 4];
        ProgressionQuery q{uniform_below(engine, p), 1 + uniform_below(engine, p - 1), p,
                           1 + uniform_below(engine, 300), p};
        const FlipProgression fp = flip_progression(q);
        const auto s = enumerate(q);
        const auto idx = flip_indices(q);
        REQUIRE(fp.k_prime == idx.size());
        std::uint64_t v = fp.a_prime;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            CHECK(s[idx[j]] == v);
            v = (v + fp.b_prime) % fp.modulus;
        }
        if (!idx.empty()) {
            CHECK(fp.first_index == idx.front());
        }
    }
}

TEST_CASE("flip locations are small: with b < p/2 flips are exactly the values below b") {
    Engine engine(32);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::uint64_t p = test_primes()[static_cast<std::size_t>(trial) % 4];
        const ProgressionQuery q{uniform_below(engine, p), 1 + uniform_below(engine, (p - 1) / 2), p,
                                 1 + uniform_below(engine, 500), p};
        REQUIRE(2 * q.b < p);
        const auto s = enumerate(q);
        const auto idx = flip_indices(q);
        std::vector<std::uint64_t> below_b;
        for (std::uint64_t i = 0; i < q.k; ++i) {
            if (s[i] < q.b) {
                below_b.push_back(i);
            }
        }
        CHECK(idx == below_b);
        CHECK(idx.size() <= (q.k + 1) / 2);
    }
}

TEST_CASE("element comparison: values grow with distance from the nearest flip") {
    Engine engine(33);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::uint64_t p = test_primes()[1 + static_cast<std::size_t>(trial) % 3];
        const ProgressionQuery q{uniform_below(engine, p), 1 + uniform_below(engine, (p - 1) / 2), p,
                                 1 + uniform_below(engine, 400), p};
        const auto s = enumerate(q);
        // lo[d], hi[d]: range of values exactly d places after their nearest preceding flip.
        std::vector<std::uint64_t> lo, hi;
        std::int64_t last_flip = -1;
        for (std::uint64_t i = 0; i < q.k; ++i) {
            if ((i == 0 && q.a < q.b) || (i > 0 && s[i] < s[i - 1])) {
                last_flip = static_cast<std::int64_t>(i);
            }
            if (last_flip < 0) {
                continue;
            }
            const auto d = static_cast<std::size_t>(static_cast<std::int64_t>(i) - last_flip);
            if (d >= lo.size()) {
                lo.resize(d + 1, p);
                hi.resize(d + 1, 0);
            }
            lo[d] = std::min(lo[d], s[i]);
            hi[d] = std::max(hi[d], s[i]);
        }
        for (std::size_t d = 1; d < lo.size(); ++d) {
            CHECK(hi[d - 1] < lo[d]);
        }
    }
}

TEST_CASE("reversal preserves the value multiset") {
    Engine engine(34);
    for (int trial = 0; trial < 500; ++trial) {
        const std::uint64_t p = test_primes()[static_cast<std::size_t>(trial) % 5];
        ProgressionQuery q{uniform_below(engine, p), 1 + uniform_below(engine, p - 1), p, 1 + uniform_below(engine, 200), p};
        ProgressionQuery r = q;
        r.a = static_cast<std::uint64_t>((q.a + static_cast<u128>(q.k - 1) * q.b) % p);
        r.b = p - q.b;
        CHECK(sorted(enumerate(q)) == sorted(enumerate(r)));
    }
}

TEST_CASE("scan_values_below examples") {
    CHECK(sorted(scan_values_below({2, 3, 7, 5, 2})) == std::vector<std::uint64_t>{0, 1});
    CHECK(scan_values_below({2, 3, 7, 5, 0}).empty());
    CHECK(sorted(scan_values_below({2, 3, 7, 5, 7})) == std::vector<std::uint64_t>{0, 1, 2, 4, 5});
    CHECK(scan_values_below({4, 0, 11, 3, 5}) == std::vector<std::uint64_t>{4, 4, 4});
    CHECK(scan_values_below({4, 0, 11, 3, 4}).empty());
}

TEST_CASE("scan_below_threshold examples") {
    const ScanResult r1 = scan_below_threshold({2, 3, 7, 5, 2});
    CHECK(r1.indices == std::vector<std::uint64_t>{2, 4});
    CHECK(r1.values == std::vector<std::uint64_t>{1, 0});

    // Step 5 > 7/2 goes through the reversal.
    const ScanResult r2 = scan_below_threshold({1, 5, 7, 4, 3});
    CHECK(r2.indices == std::vector<std::uint64_t>{0, 3});
    CHECK(r2.values == std::vector<std::uint64_t>{1, 2});

    const ScanResult r3 = scan_below_threshold({4, 0, 11, 3, 5});
    CHECK(r3.indices == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(r3.values == std::vector<std::uint64_t>{4, 4, 4});

    // Index 0 is itself a flip when a < b.
    const ScanResult r4 = scan_below_threshold({2, 3, 7, 5, 3});
    CHECK(r4.indices == std::vector<std::uint64_t>{0, 2, 4});
    CHECK(r4.values == std::vector<std::uint64_t>{2, 1, 0});
}

TEST_CASE("brute_scan examples") {
    CHECK(brute_scan({2, 3, 7, 5, 2}).indices == std::vector<std::uint64_t>{2, 4});
    CHECK(brute_scan({2, 3, 7, 5, 0}).indices.empty());
    CHECK(brute_scan({3, 6, 7, 1, 4}).indices == std::vector<std::uint64_t>{0});
}

TEST_CASE("queries are validated") {
    CHECK_THROWS_AS(scan_below_threshold({7, 1, 7, 5, 3}), ArgumentError);
    CHECK_THROWS_AS(scan_below_threshold({1, 7, 7, 5, 3}), ArgumentError);
    CHECK_THROWS_AS(scan_below_threshold({1, 1, 7, 0, 3}), ArgumentError);
    CHECK_THROWS_AS(scan_below_threshold({1, 1, 7, 5, 8}), ArgumentError);
    CHECK_THROWS_AS(scan_values_below({1, 1, 1, 5, 1}), ArgumentError);
}

TEST_CASE("progressions longer than the modulus repeat every p positions") {
    const ScanResult r = scan_below_threshold({3, 2, 7, 20, 2});
    CHECK(r == brute_scan({3, 2, 7, 20, 2}));
    CHECK(r.indices == std::vector<std::uint64_t>{2, 6, 9, 13, 16});
}

TEST_CASE("fast scan equals brute force on random queries") {
    Engine engine(35);
    int mismatches = 0;
    for (int trial = 0; trial < 5000; ++trial) {
        const ProgressionQuery q = random_query(engine, test_primes()[static_cast<std::size_t>(trial) % 5], 4096);
        mismatches += scan_below_threshold(q) != brute_scan(q);
    }
    CHECK(mismatches == 0);
}

TEST_CASE("recursion depth stays logarithmic in k") {
    Engine engine(36);
    for (int trial = 0; trial < 5000; ++trial) {
        const ProgressionQuery q = random_query(engine, test_primes()[static_cast<std::size_t>(trial) % 5], 1 << 16);
        WorkCounters counters;
        scan_below_threshold(q, &counters);
        const double bound = 2 * std::log2(static_cast<double>(q.k)) + 8;
        CHECK_MESSAGE(static_cast<double>(counters.max_scan_depth) <= bound,
                      "S(" << q.a << "," << q.b << "," << q.k << "," << q.p << ") t=" << q.t);
        // Each skip is followed by an emitted value, except possibly the last one.
        CHECK(counters.scan_skips <= counters.emitted_cells + counters.scan_frames + 4);
    }
}

TEST_CASE("counters record emitted cells and the single inversion") {
    WorkCounters counters;
    const ScanResult r = scan_below_threshold({2, 3, 7, 5, 3}, &counters);
    CHECK(counters.emitted_cells == r.size());
    CHECK(counters.inversions == 1);
    CHECK(counters.scan_frames >= 1);
}

} // TEST_SUITE
