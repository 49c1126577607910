#include "mfp/errors.hpp"
#include "mfp/modular.hpp"
#include "mfp/rng.hpp"

#include <doctest.h>

#include <vector>

using namespace mfp;

TEST_SUITE("modular") {

TEST_CASE("primality of the supported moduli") {
    for (std::uint64_t p : std::vector<std::uint64_t>{7, 101, 10007, FieldParams::kMersenne31, FieldParams::kMersenne61}) {
        CHECK(is_prime(p));
    }
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
    CHECK_FALSE(is_prime(3215031751ULL)); // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_FALSE(is_prime(FieldParams::kMersenne61 - 2));
}

TEST_CASE("FieldParams rejects bad moduli and universes") {
    CHECK_THROWS_AS(FieldParams(8, 3), ArgumentError);
    CHECK_THROWS_AS(FieldParams(7, 7), ArgumentError);
    CHECK_THROWS_AS(FieldParams(7, 0), ArgumentError);
    CHECK_THROWS_AS(FieldParams((std::uint64_t{1} << 63) + 29, 5), ArgumentError);
    const FieldParams def;
    CHECK(def.prime() == FieldParams::kMersenne61);
    CHECK(def.universe() == FieldParams::kMersenne61 - 1);
}

TEST_CASE("mod_inverse examples") {
    const auto p7 = FieldParams::for_prime(7);
    CHECK(mod_inverse(3, p7) == 5);
    CHECK(mod_inverse(1, p7) == 1);
    CHECK(mod_inverse(10, FieldParams::for_prime(101)) == 91);
    CHECK_THROWS_AS(mod_inverse(0, p7), NoInverseError);
    CHECK_THROWS_AS(mod_inverse(14, p7), NoInverseError);
}

TEST_CASE("mod_inverse is an involution and inverts, on every supported prime") {
    Engine engine(17);
    for (std::uint64_t p : std::vector<std::uint64_t>{7, 101, 10007, FieldParams::kMersenne31, FieldParams::kMersenne61}) {
        const auto params = FieldParams::for_prime(p);
        for (int trial = 0; trial < 2000; ++trial) {
            const FieldElement v = 1 + uniform_below(engine, p - 1);
            const FieldElement w = mod_inverse(v, params);
            CHECK(params.mul(v, w) == 1);
            CHECK(mod_inverse(w, params) == v);
        }
    }
}

TEST_CASE("Mersenne folding agrees with the generic 128-bit product") {
    const FieldParams params;
    Engine engine(3);
    for (int trial = 0; trial < 10000; ++trial) {
        const FieldElement a = uniform_below(engine, params.prime());
        const FieldElement b = uniform_below(engine, params.prime());
        CHECK(params.mul(a, b) == mul_mod(a, b, params.prime()));
    }
    const FieldElement top = params.prime() - 1;
    CHECK(params.mul(top, top) == 1);
}

TEST_CASE("poly_eval examples") {
    const auto p7 = FieldParams::for_prime(7);
    const std::vector<FieldElement> constant{5}, linear{1, 1}, quadratic{2, 3, 1};
    CHECK(poly_eval(constant, 3, p7) == 5);
    CHECK(poly_eval(linear, 2, p7) == 3);
    CHECK(poly_eval(quadratic, 4, p7) == 2);
    CHECK_THROWS_AS(poly_eval(std::vector<FieldElement>{}, 1, p7), ArgumentError);
}

TEST_CASE("Horner matches term-by-term power summation") {
    Engine engine(5);
    for (std::uint64_t p : std::vector<std::uint64_t>{101, 10007, FieldParams::kMersenne61}) {
        const auto params = FieldParams::for_prime(p);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<FieldElement> coeffs(1 + uniform_below(engine, 101));
            for (auto &c : coeffs) {
                c = uniform_below(engine, p);
            }
            const FieldElement x = uniform_below(engine, p);
            FieldElement sum = 0;
            for (std::size_t j = 0; j < coeffs.size(); ++j) {
                sum = params.add(sum, params.mul(coeffs[j], params.pow(x, j)));
            }
            CHECK(poly_eval(coeffs, x, params) == sum);
        }
    }
}

} // TEST_SUITE
