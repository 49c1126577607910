#include "mfp/modular.hpp"

#include "mfp/errors.hpp"

#include <array>
#include <string>

namespace mfp {

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) {
            result = mul_mod(result, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) {
        return false;
    }
    // These witnesses are sufficient for all n < 3.3e24.
    constexpr std::array<std::uint64_t, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t w : witnesses) {
        if (n % w == 0) {
            return n == w;
        }
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t w : witnesses) {
        std::uint64_t x = pow_mod(w, d, n);
        if (x == 1 || x == n - 1) {
            continue;
        }
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

FieldParams::FieldParams(std::uint64_t p, std::uint64_t u) : p_(p), u_(u) {
    if (p >= (std::uint64_t{1} << 63)) {
        throw ArgumentError("prime modulus must be below 2^63, got " + std::to_string(p));
    }
    if (!is_prime(p)) {
        throw ArgumentError("modulus " + std::to_string(p) + " is not prime");
    }
    if (u == 0 || u >= p) {
        throw ArgumentError("universe bound must satisfy 1 <= u < p, got u=" + std::to_string(u) +
                            " p=" + std::to_string(p));
    }
}

FieldElement FieldParams::pow(FieldElement base, std::uint64_t exp) const noexcept {
    FieldElement result = 1 % p_;
    base %= p_;
    while (exp > 0) {
        if (exp & 1) {
            result = mul(result, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    return result;
}

std::optional<std::uint64_t> try_inverse(std::uint64_t v, std::uint64_t m) noexcept {
    v %= m;
    // Bezout coefficients stay within (-m, m), so int64 suffices for m < 2^63.
    std::int64_t t = 0;
    std::int64_t new_t = 1;
    std::uint64_t r = m;
    std::uint64_t new_r = v;
    while (new_r != 0) {
        std::uint64_t q = r / new_r;
        std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * new_t;
        t = new_t;
        new_t = tmp_t;
        std::uint64_t tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    if (r != 1) {
        return std::nullopt;
    }
    return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m)) : static_cast<std::uint64_t>(t);
}

FieldElement mod_inverse(FieldElement v, const FieldParams &params) {
    const std::uint64_t p = params.prime();
    if (v % p == 0) {
        throw NoInverseError("0 has no inverse modulo " + std::to_string(p));
    }
    auto inv = try_inverse(v, p);
    if (!inv) {
        throw NoInverseError(std::to_string(v) + " is not invertible modulo " + std::to_string(p));
    }
    return *inv;
}

FieldElement poly_eval(std::span<const FieldElement> coeffs, FieldElement x, const FieldParams &params) {
    if (coeffs.empty()) {
        throw ArgumentError("poly_eval: empty coefficient list");
    }
    x = params.reduce(x);
    FieldElement acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = params.add(params.mul(acc, x), params.reduce(*it));
    }
    return acc;
}

} // namespace mfp
