#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "cliffcut/rng.hpp"

using namespace cliffcut;

TEST_CASE("splitmix64 is deterministic and advances its state") {
    uint64_t s1 = 42, s2 = 42;
    CHECK(splitmix64(s1) == splitmix64(s2));
    CHECK(s1 == s2);
    CHECK(splitmix64(s1) != splitmix64(s2) + 1);  // streams stay in lockstep
    uint64_t before = s1;
    splitmix64(s1);
    CHECK(s1 != before);
}

TEST_CASE("derive_seed separates contexts") {
    uint64_t master = 1;
    CHECK(derive_seed(master, {1, 2, 3}) == derive_seed(master, {1, 2, 3}));
    CHECK(derive_seed(master, {1, 2, 3}) != derive_seed(master, {1, 2, 4}));
    CHECK(derive_seed(master, {1, 2, 3}) != derive_seed(master, {1, 3, 2}));
    CHECK(derive_seed(master, {1, 2, 3}) != derive_seed(2, {1, 2, 3}));
    // low-entropy words still give well-spread seeds
    std::set<uint64_t> seen;
    for (uint64_t n = 0; n < 100; ++n) {
        seen.insert(derive_seed(0, {0, n, 0}));
    }
    CHECK(seen.size() == 100);
}

TEST_CASE("Rng streams are reproducible per seed") {
    Rng a(7), b(7), c(8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        uint64_t x = a.next_u64();
        all_equal = all_equal && (x == b.next_u64());
        any_diff = any_diff || (x != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform01 range and mean") {
    Rng rng(11);
    double sum = 0;
    for (int i = 0; i < 20000; ++i) {
        double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // mean 0.5, sd of the mean = (1/sqrt(12))/sqrt(20000) ~= 0.002
    CHECK(std::abs(sum / 20000 - 0.5) < 0.01);
}

TEST_CASE("uniform_int is in range, unbiased enough, validates n") {
    Rng rng(3);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 50000; ++i) {
        uint64_t v = rng.uniform_int(5);
        REQUIRE(v < 5);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(c > 9000);  // expected 10000, binomial sd ~89
        CHECK(c < 11000);
    }
    CHECK(rng.uniform_int(1) == 0);
    CHECK_THROWS_AS(rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("normal moments") {
    Rng rng(5);
    double sum = 0, sum2 = 0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);       // sd of mean = 1/sqrt(n) ~= 0.0045
    CHECK(std::abs(var - 1.0) < 0.05);  // sd of var ~= sqrt(2/n) ~= 0.0063
    double shifted = Rng(5).normal(3.0, 4.0);
    double base = Rng(5).normal();
    CHECK(shifted == doctest::Approx(3.0 + 2.0 * base).epsilon(1e-12));
}

TEST_CASE("exponential moments and positivity") {
    Rng rng(9);
    double sum = 0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        double x = rng.exponential(2.0);
        REQUIRE(x >= 0.0);
        sum += x;
    }
    CHECK(std::abs(sum / n - 2.0) < 0.1);  // sd of mean = 2/sqrt(n) ~= 0.009
}
