#include "mfp/progression_scan.hpp"

#include "mfp/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mfp {

namespace {

// Progressions this short are enumerated outright. Without a floor, a single-term progression can
// descend through ~log2(p) flip levels before its step drops below t.
constexpr std::uint64_t kDirectLimit = 4;

std::uint64_t ceil_div(std::uint64_t n, std::uint64_t d) noexcept {
    return n / d + (n % d != 0);
}

// Requires 0 < b < m, a < m, k >= 1.
FlipProgression flips_of(std::uint64_t a, std::uint64_t b, std::uint64_t m, std::uint64_t k) noexcept {
    FlipProgression fp;
    fp.modulus = b;
    fp.b_prime = (b - m % b) % b;
    const u128 last = static_cast<u128>(a) + static_cast<u128>(k - 1) * b;
    fp.k_prime = static_cast<std::uint64_t>(last / m) + (a < b ? 1 : 0);
    if (a < b) {
        fp.first_index = 0;
        fp.a_prime = a;
    } else {
        fp.first_index = ceil_div(m - a, b);
        fp.a_prime = fp.k_prime == 0 ? 0 : static_cast<std::uint64_t>(a + static_cast<u128>(fp.first_index) * b - m);
    }
    return fp;
}

void collect_values(std::uint64_t a, std::uint64_t b, std::uint64_t m, std::uint64_t k, std::uint64_t t,
                    std::vector<FieldElement> &out, WorkCounters *counters) {
    std::uint64_t depth = 0;
    std::uint64_t skips = 0;
    const std::size_t before = out.size();
    t = std::min(t, m);

    for (;;) {
        ++depth;
        if (k == 0 || t == 0) {
            break;
        }
        if (b == 0) {
            if (a < t) {
                out.insert(out.end(), k, a);
            }
            break;
        }
        if (k <= kDirectLimit) {
            std::uint64_t v = a;
            for (std::uint64_t i = 0; i < k; ++i) {
                if (v < t) {
                    out.push_back(v);
                } else {
                    ++skips;
                }
                v += b;
                if (v >= m) {
                    v -= m;
                }
            }
            break;
        }
        if (b < t) {
            // Runs climb by b until they wrap; a wrapped value is below b and so below t. Each jump
            // over a run of values >= t therefore lands on a value that is emitted.
            std::uint64_t i = 0;
            std::uint64_t v = a;
            while (i < k) {
                if (v < t) {
                    out.push_back(v);
                    ++i;
                    v += b;
                    if (v >= m) {
                        v -= m;
                    }
                } else {
                    const std::uint64_t steps = ceil_div(m - v, b);
                    i += steps;
                    ++skips;
                    if (i >= k) {
                        break;
                    }
                    v = v + steps * b - m;
                }
            }
            break;
        }
        if (b > m - b) {
            // Walk backwards from the last term with step m - b < m/2; same values, reversed.
            a = static_cast<std::uint64_t>((a + static_cast<u128>(k - 1) * b) % m);
            b = m - b;
            continue;
        }
        // t <= b <= m/2: only values below b can qualify, and those are exactly the flip locations.
        const FlipProgression fp = flips_of(a, b, m, k);
        a = fp.a_prime;
        b = fp.b_prime;
        m = fp.modulus;
        k = fp.k_prime;
    }

    if (counters) {
        counters->scan_frames += depth;
        counters->scan_skips += skips;
        counters->emitted_cells += out.size() - before;
        counters->max_scan_depth = std::max(counters->max_scan_depth, depth);
    }
}

} // namespace

void ProgressionQuery::validate() const {
    if (p < 2 || p >= (std::uint64_t{1} << 63)) {
        throw ArgumentError("progression modulus must lie in [2, 2^63), got " + std::to_string(p));
    }
    if (k < 1) {
        throw ArgumentError("progression length must be at least 1");
    }
    if (a >= p || b >= p) {
        throw ArgumentError("progression start and step must be residues below " + std::to_string(p));
    }
    if (t > p) {
        throw ArgumentError("threshold " + std::to_string(t) + " exceeds modulus " + std::to_string(p));
    }
}

FlipProgression flip_progression(const ProgressionQuery &q) {
    q.validate();
    if (q.b == 0) {
        throw DegenerateStepError("progression with step 0 is constant and has no flip locations");
    }
    return flips_of(q.a, q.b, q.p, q.k);
}

std::vector<FieldElement> scan_values_below(const ProgressionQuery &q, WorkCounters *counters) {
    q.validate();
    std::vector<FieldElement> out;
    collect_values(q.a, q.b, q.p, q.k, q.t, out, counters);
    return out;
}

void scan_below_threshold_unordered(const ProgressionQuery &q, ScanResult &out, WorkCounters *counters) {
    q.validate();
    out.indices.clear();
    out.values.clear();

    if (q.b == 0) {
        if (q.a < q.t) {
            out.indices.resize(q.k);
            std::iota(out.indices.begin(), out.indices.end(), std::uint64_t{0});
            out.values.assign(q.k, q.a);
        }
        if (counters) {
            ++counters->scan_frames;
            counters->emitted_cells += out.values.size();
            counters->max_scan_depth = std::max<std::uint64_t>(counters->max_scan_depth, 1);
        }
        return;
    }

    // The progression repeats with period p, so one period determines every hit.
    const std::uint64_t period = std::min(q.k, q.p);
    std::vector<FieldElement> values;
    values.swap(out.values);
    collect_values(q.a, q.b, q.p, period, q.t, values, counters);
    if (values.empty()) {
        out.values.swap(values);
        return;
    }

    const auto inv = try_inverse(q.b, q.p);
    if (!inv) {
        throw ArgumentError("step " + std::to_string(q.b) + " is not invertible modulo " + std::to_string(q.p));
    }
    if (counters) {
        ++counters->inversions;
    }

    const bool repeats = q.k > q.p;
    out.indices.reserve(values.size());
    if (repeats) {
        out.values.reserve(values.size() * (q.k / q.p + 1));
    }
    for (FieldElement v : values) {
        const std::uint64_t diff = v >= q.a ? v - q.a : v + (q.p - q.a);
        const std::uint64_t i0 = mul_mod(diff, *inv, q.p);
        if (i0 >= period) {
            throw InternalError("recovered index " + std::to_string(i0) + " outside [0, " + std::to_string(period) +
                                ") for value " + std::to_string(v));
        }
        if (!repeats) {
            out.indices.push_back(i0);
            continue;
        }
        for (std::uint64_t i = i0; i < q.k; i += q.p) {
            out.indices.push_back(i);
            out.values.push_back(v);
        }
    }
    if (!repeats) {
        out.values.swap(values);
    }
}

ScanResult scan_below_threshold(const ProgressionQuery &q, WorkCounters *counters) {
    ScanResult hits;
    scan_below_threshold_unordered(q, hits, counters);

    std::vector<std::size_t> order(hits.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return hits.indices[l] < hits.indices[r]; });

    ScanResult sorted;
    sorted.indices.reserve(order.size());
    sorted.values.reserve(order.size());
    for (std::size_t j : order) {
        sorted.indices.push_back(hits.indices[j]);
        sorted.values.push_back(hits.values[j]);
    }
    return sorted;
}

ScanResult brute_scan(const ProgressionQuery &q) {
    q.validate();
    ScanResult out;
    std::uint64_t v = q.a;
    for (std::uint64_t i = 0; i < q.k; ++i) {
        if (v < q.t) {
            out.indices.push_back(i);
            out.values.push_back(v);
        }
        v += q.b;
        if (v >= q.p) {
            v -= q.p;
        }
    }
    return out;
}

} // namespace mfp
