#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "cei/rng.hpp"
#include "cei/stats.hpp"

TEST_SUITE("rng") {

TEST_CASE("mix64 reproduces the published splitmix64 sequence") {
    const std::uint64_t G = 0x9E3779B97F4A7C15ull;
    // First three outputs of the splitmix64 reference generator seeded with
    // 1234567 are mix64(seed + k*G) for k = 1, 2, 3.
    CHECK(cei::mix64(1234567ull + G) == 6457827717110365317ull);
    CHECK(cei::mix64(1234567ull + 2 * G) == 3203168211198807973ull);
    CHECK(cei::mix64(1234567ull + 3 * G) == 9817491932198370423ull);
    CHECK(cei::mix64(0) == 0);
    CHECK(cei::mix64(1) == 6238072747940578789ull);
    CHECK(cei::mix64(0xDEADBEEFull) == 5622224078331092714ull);
}

TEST_CASE("identical (master_seed, stream_id) reproduces every draw") {
    cei::rng_stream a(42, 7);
    cei::rng_stream b(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    for (int i = 0; i < 1000; ++i) CHECK(a.next_uniform() == b.next_uniform());
    for (int i = 0; i < 1000; ++i) CHECK(a.next_gaussian() == b.next_gaussian());
    // A fresh stream restarts the sequence from the top regardless of how far
    // other instances have advanced.
    cei::rng_stream c(42, 7);
    cei::rng_stream d(42, 7);
    (void)d.next_u64();
    CHECK(c.next_u64() == cei::rng_stream(42, 7).next_u64());
}

TEST_CASE("distinct stream ids and distinct seeds give distinct sequences") {
    cei::rng_stream s0(42, 0);
    cei::rng_stream s1(42, 1);
    cei::rng_stream t0(43, 0);
    bool any_diff_stream = false;
    bool any_diff_seed = false;
    cei::rng_stream s0b(42, 0);
    for (int i = 0; i < 16; ++i) {
        std::uint64_t x = s0.next_u64();
        any_diff_stream |= (x != s1.next_u64());
        any_diff_seed |= (s0b.next_u64() != t0.next_u64());
    }
    CHECK(any_diff_stream);
    CHECK(any_diff_seed);
}

TEST_CASE("next_uniform lies in [0,1) and matches the uniform law") {
    cei::rng_stream rng(20240917, 0);
    std::vector<double> u(10000);
    for (double& v : u) {
        v = rng.next_uniform();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    cei::test_report ks = cei::ks_uniform(u, 0.001);
    CHECK(ks.passed);
    cei::test_report mom = cei::moment_check(u, 0.5, 1.0 / 12.0, 4.0);
    CHECK(mom.passed);
}

TEST_CASE("next_gaussian matches the standard normal law") {
    cei::rng_stream rng(20240918, 0);
    std::vector<double> z(10000);
    for (double& v : z) v = rng.next_gaussian();
    cei::test_report mom = cei::moment_check(z, 0.0, 1.0, 4.0);
    CHECK(mom.passed);
    // Probability-integral transform: Phi(Z) should be uniform on [0,1].
    std::vector<double> u(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) u[i] = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    cei::test_report ks = cei::ks_uniform(u, 0.001);
    CHECK(ks.passed);
}

TEST_CASE("parallel streams are uncorrelated") {
    cei::rng_stream a(555, 1);
    cei::rng_stream b(555, 2);
    const int N = 10000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < N; ++i) {
        double x = a.next_uniform();
        double y = b.next_uniform();
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    double cov = sxy / N - (sx / N) * (sy / N);
    double vx = sxx / N - (sx / N) * (sx / N);
    double vy = syy / N - (sy / N) * (sy / N);
    double corr = cov / std::sqrt(vx * vy);
    CHECK(std::abs(corr) < 0.05);
}

TEST_CASE("next_index stays in range and hits every cell") {
    cei::rng_stream rng(777, 0);
    const int n = 7;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < 7000; ++i) {
        int k = rng.next_index(n);
        REQUIRE(k >= 0);
        REQUIRE(k < n);
        ++counts[k];
    }
    for (int k = 0; k < n; ++k) CHECK(counts[k] > 0);
}

}  // TEST_SUITE
