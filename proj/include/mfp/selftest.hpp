#pragma once

#include "mfp/progression_scan.hpp"
#include "mfp/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mfp {

enum class SelftestScale { quick, full };

struct SelftestOptions {
    SelftestScale scale = SelftestScale::quick;
    std::uint64_t seed = 1;
    /// Test hook: perturbs every fast-scan result before comparison, so the run must fail.
    bool corrupt = false;
};

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;

    bool passed() const noexcept;
};

SelftestReport run_selftest(const SelftestOptions &options);

/// Primes the randomized checks draw from: 7, 101, 10007, 2^31 - 1 and 2^61 - 1.
const std::vector<std::uint64_t> &test_primes();

/**
 * A random progression query: k in [1, max_k] (log-uniform), a and b uniform with occasional
 * b = 0 or b near p, and t drawn from {0, tiny, 12*l'*p/b-shaped, uniform, p}.
 */
ProgressionQuery random_query(Engine &engine, std::uint64_t p, std::uint64_t max_k);

} // namespace mfp
