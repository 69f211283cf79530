#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rkm/rng.hpp"

using rkm::RngStream;

TEST_CASE("streams are reproducible and seed-separated") {
    RngStream a(123);
    RngStream b(123);
    RngStream c(124);
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_diff = any_diff || va != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("derived streams differ across (a, b) pairs") {
    const std::uint64_t master = 42;
    CHECK(rkm::derive_seed(master, 1, 0) != rkm::derive_seed(master, 0, 1));
    CHECK(rkm::derive_seed(master, 1, 2) != rkm::derive_seed(master, 2, 1));
    CHECK(rkm::derive_seed(master, 0, 0) != rkm::derive_seed(master + 1, 0, 0));

    RngStream s1 = RngStream::derived(master, 3, 7);
    RngStream s2 = RngStream::derived(master, 3, 7);
    CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("next_double stays in [0,1) and covers the range") {
    RngStream rng(7);
    double lo = 1.0;
    double hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("sample_from_cumulative never picks zero-mass entries") {
    // masses 0, 1, 0, 3, 0
    const std::vector<double> cumulative{0.0, 1.0, 1.0, 4.0, 4.0};
    RngStream rng(99);
    int ones = 0;
    int threes = 0;
    for (int i = 0; i < 20000; ++i) {
        const std::size_t idx = rkm::sample_from_cumulative(cumulative, rng);
        REQUIRE((idx == 1 || idx == 3));
        (idx == 1 ? ones : threes)++;
    }
    // expect 1/4 vs 3/4 within 5 sigma
    const double sigma = std::sqrt(20000 * 0.25 * 0.75);
    CHECK(std::abs(ones - 5000.0) < 5 * sigma);
    CHECK(ones + threes == 20000);
}

TEST_CASE("sample_from_cumulative rejects zero total mass") {
    RngStream rng(1);
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS_AS((void)rkm::sample_from_cumulative(zeros, rng), std::invalid_argument);
    CHECK_THROWS_AS((void)rkm::sample_from_cumulative({}, rng), std::invalid_argument);
}
