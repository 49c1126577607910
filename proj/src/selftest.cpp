#include "mfp/selftest.hpp"

#include "mfp/errors.hpp"
#include "mfp/estimator.hpp"
#include "mfp/fingerprint.hpp"
#include "mfp/oracle.hpp"
#include "mfp/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mfp {

namespace {

SelftestCheck check_scan_equivalence(std::uint64_t cases, const SelftestOptions &opt) {
    Engine engine(derive_seed(opt.seed, 0, SeedPurpose::polynomial_pair));
    const auto &primes = test_primes();
    std::uint64_t mismatches = 0;
    std::string first;
    for (std::uint64_t c = 0; c < cases; ++c) {
        const ProgressionQuery q = random_query(engine, primes[c % primes.size()], 4096);
        ScanResult fast = scan_below_threshold(q);
        if (opt.corrupt && !fast.indices.empty()) {
            fast.indices.pop_back();
            fast.values.pop_back();
        } else if (opt.corrupt) {
            fast.indices.push_back(q.k);
            fast.values.push_back(0);
        }
        if (fast != brute_scan(q)) {
            if (mismatches++ == 0) {
                std::ostringstream os;
                os << "first mismatch at S(" << q.a << "," << q.b << "," << q.k << "," << q.p << ") t=" << q.t;
                first = os.str();
            }
        }
    }
    std::ostringstream os;
    os << cases << " queries, " << mismatches << " mismatches";
    if (mismatches) {
        os << "; " << first;
    }
    return {"scan_oracle_equivalence", mismatches == 0, os.str()};
}

SelftestCheck check_block_equivalence(std::uint64_t cases, const SelftestOptions &opt) {
    Engine engine(derive_seed(opt.seed, 1, SeedPurpose::polynomial_pair));
    const auto &primes = test_primes();
    std::uint64_t mismatches = 0;
    for (std::uint64_t c = 0; c < cases; ++c) {
        const FieldParams params = FieldParams::for_prime(primes[c % primes.size()]);
        const std::uint64_t k = 1 + uniform_below(engine, 256);
        const std::uint64_t b = 1 + uniform_below(engine, 1000);
        const auto d = static_cast<std::uint32_t>(1 + uniform_below(engine, 8));
        std::vector<ItemId> stream(b);
        for (auto &x : stream) {
            x = uniform_below(engine, params.universe());
        }
        const PolynomialPair pair = sample_base_pair(engine(), FamilyConfig{d, 0.5, params});
        BlockState fast = block_update(stream, pair, k, params.prime(), params);
        if (opt.corrupt) {
            fast.min_items[0] ^= 1;
        }
        if (fast != naive_minhash_block(stream, pair, k, params)) {
            ++mismatches;
        }
    }
    std::ostringstream os;
    os << cases << " blocks, " << mismatches << " mismatches";
    return {"block_equivalence", mismatches == 0, os.str()};
}

SelftestCheck check_round_trip(const SelftestOptions &opt) {
    const SketchConfig config = sketch_config_for(0.25, 0.25, opt.seed);
    const auto items = random_distinct_items(500, opt.seed, config.params.universe());
    const Fingerprint fp = build_fingerprint(items, config);
    const auto bytes = serialize(fp);
    const bool ok = deserialize(bytes) == fp && serialize(build_fingerprint(items, config)) == bytes;
    return {"serialization_round_trip", ok, std::to_string(bytes.size()) + " bytes"};
}

SelftestCheck check_estimator(std::uint64_t seeds, const SelftestOptions &opt) {
    const double epsilon = 0.15;
    const double delta = 0.1;
    const std::size_t union_size = 2000;
    std::uint64_t runs = 0;
    std::uint64_t good = 0;
    for (double j : {0.0, 0.5, 1.0}) {
        for (std::uint64_t s = 0; s < seeds; ++s) {
            const std::uint64_t seed = opt.seed * 1000003 + s;
            const SketchConfig config = sketch_config_for(epsilon, delta, seed);
            const auto pair = make_jaccard_pair(union_size, static_cast<std::size_t>(j * union_size), seed,
                                                config.params.universe());
            const auto est = median_estimate(build_fingerprint(pair.a, config), build_fingerprint(pair.b, config));
            ++runs;
            good += std::abs(est.j_clamped - pair.jaccard) <= epsilon;
        }
    }
    const double rate = static_cast<double>(good) / static_cast<double>(runs);
    std::ostringstream os;
    os << good << "/" << runs << " estimates within epsilon=" << epsilon;
    return {"estimator_accuracy", rate >= 0.86, os.str()};
}

template <class Fn>
SelftestCheck guarded(const char *name, Fn &&fn) {
    try {
        return fn();
    } catch (const std::exception &e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

} // namespace

bool SelftestReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

const std::vector<std::uint64_t> &test_primes() {
    static const std::vector<std::uint64_t> primes{7, 101, 10007, FieldParams::kMersenne31, FieldParams::kMersenne61};
    return primes;
}

ProgressionQuery random_query(Engine &engine, std::uint64_t p, std::uint64_t max_k) {
    ProgressionQuery q;
    q.p = p;
    const auto log_k = static_cast<std::uint64_t>(std::log2(static_cast<double>(max_k)));
    q.k = std::min(max_k, 1 + uniform_below(engine, std::uint64_t{1} << uniform_below(engine, log_k + 1)));
    q.a = uniform_below(engine, p);
    const std::uint64_t near = std::min<std::uint64_t>(p - 1, 8);
    switch (uniform_below(engine, 16)) {
    case 0:
        q.b = 0;
        break;
    case 1:
        q.b = 1 + uniform_below(engine, near);
        break;
    case 2:
        q.b = p - 1 - uniform_below(engine, near);
        break;
    default:
        q.b = uniform_below(engine, p);
    }
    switch (uniform_below(engine, 5)) {
    case 0:
        q.t = 0;
        break;
    case 1:
        q.t = std::min(p, 1 + uniform_below(engine, 16));
        break;
    case 2: {
        // The shape of the sketch threshold 12 * l' * p / b for l' = 87 and stream lengths up to 10^6.
        const std::uint64_t stream = 1000 + uniform_below(engine, 1000000);
        const u128 num = static_cast<u128>(12 * 87) * p;
        q.t = static_cast<std::uint64_t>(std::min<u128>(p, num / stream + (num % stream != 0)));
        break;
    }
    case 3:
        q.t = uniform_below(engine, p + 1);
        break;
    default:
        q.t = p;
    }
    return q;
}

SelftestReport run_selftest(const SelftestOptions &options) {
    const bool full = options.scale == SelftestScale::full;
    SelftestReport report;
    report.checks.push_back(
        guarded("scan_oracle_equivalence", [&] { return check_scan_equivalence(full ? 10000 : 1000, options); }));
    report.checks.push_back(guarded("block_equivalence", [&] { return check_block_equivalence(full ? 200 : 20, options); }));
    report.checks.push_back(guarded("serialization_round_trip", [&] { return check_round_trip(options); }));
    if (full) {
        report.checks.push_back(guarded("estimator_accuracy", [&] { return check_estimator(20, options); }));
    }
    return report;
}

} // namespace mfp
