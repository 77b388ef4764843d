#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "apv/philox.hpp"

using namespace apv;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter addressing is reproducible and stream-separated") {
    CounterRng a(42, 7, 0), b(42, 7, 0), other_stream(42, 7, 1), other_index(42, 8, 0), other_seed(43, 7, 0);
    for (int i = 0; i < 16; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x != other_stream.uniform());
        CHECK(x != other_index.uniform());
        CHECK(x != other_seed.uniform());
    }
}

TEST_CASE("uniforms lie in the open unit interval with the right moments") {
    CounterRng rng(1, 0, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform();
        REQUIRE(x > 0.0);
        REQUIRE(x < 1.0);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean - 0.5) < 5 * std::sqrt(1.0 / 12.0 / n));
    CHECK(sum2 / n - mean * mean == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normals have zero mean and unit variance") {
    CounterRng rng(2, 0, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
        sum4 += z * z * z * z;
    }
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sum4 / n == doctest::Approx(3.0).epsilon(0.05));
}
