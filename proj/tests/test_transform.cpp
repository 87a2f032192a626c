#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dcc/transform.hpp"

using namespace dcc;

TEST_CASE("zero block transforms to zero") {
    CoeffBlock zero{};
    CHECK(forward_transform(zero) == zero);
    CHECK(inverse_transform(zero) == zero);
}

TEST_CASE("constant block yields a lone DC coefficient") {
    CoeffBlock x{};
    x.fill(37);
    const CoeffBlock y = forward_transform(x);
    CHECK(y[0] == 37 * 16);
    for (std::size_t i = 1; i < 16; ++i) CHECK(y[i] == 0);
    CHECK(inverse_transform(y) == x);
}

TEST_CASE("forward/inverse is the identity over random 9-bit blocks") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> d(-255, 255);
    for (int iter = 0; iter < 100000; ++iter) {
        CoeffBlock x{};
        for (auto& v : x) v = d(rng);
        REQUIRE(inverse_transform(forward_transform(x)) == x);
    }
}

TEST_CASE("quantizer step schedule") {
    CHECK(quant_step(0) == 1);
    CHECK(quant_step(6) == 2);
    CHECK(quant_step(12) == 4);
    CHECK(quant_step(18) == 8);
    CHECK(quant_step(20) == 10);
    CHECK(quant_step(24) == 16);
    CHECK(quant_step(40) == 102);
    CHECK_THROWS_AS(quant_step(-1), InvalidArgument);
    CHECK_THROWS_AS(quant_step(41), InvalidArgument);
}

TEST_CASE("qp zero quantization is the identity") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> d(-9000, 9000);
    CoeffBlock x{};
    for (auto& v : x) v = d(rng);
    CHECK(quantize(x, 0) == x);
    CHECK(dequantize(x, 0) == x);
}

TEST_CASE("qp six reconstruction error stays within half a step") {
    // direct arithmetic over every coefficient magnitude in [-255, 255]
    for (int c = -255; c <= 255; ++c) {
        const int step = quant_step(6);
        const std::int32_t q = quantize_coeff(c, step);
        const std::int32_t back = q * step;
        REQUIRE(std::abs(back - c) <= step / 2);
    }
    // the worked case: coefficient 3, step 2, ties away -> 2, reconstructs 4
    CHECK(quantize_coeff(3, 2) == 2);
    CHECK(quantize_coeff(-3, 2) == -2);
}

TEST_CASE("larger qp never yields more nonzero coefficients") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<int> d(-600, 600);
    for (int iter = 0; iter < 2000; ++iter) {
        CoeffBlock x{};
        for (auto& v : x) v = d(rng);
        int prev_nnz = 17;
        for (int qp : {0, 6, 12, 18, 24, 30, 36, 40}) {
            const CoeffBlock q = quantize(x, qp);
            int nnz = 0;
            for (auto v : q) nnz += v != 0;
            REQUIRE(nnz <= prev_nnz);
            prev_nnz = nnz;
        }
    }
}
