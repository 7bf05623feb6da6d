#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cei/samplers.hpp"
#include "cei/stats.hpp"
#include "cei/transforms.hpp"
#include "test_util.hpp"

using cei::grid_path;
using cei::interval;
using testutil::thrown_code;

namespace {

grid_path gp(std::vector<double> v) { return cei::make_grid_path(std::move(v)); }

std::vector<std::vector<double>> all_arrangements(std::vector<double> inc) {
    std::sort(inc.begin(), inc.end());
    std::vector<std::vector<double>> out;
    do {
        out.push_back(inc);
    } while (std::next_permutation(inc.begin(), inc.end()));
    return out;
}

grid_path cumsum_path(const std::vector<double>& inc) {
    std::vector<double> v(inc.size() + 1, 0.0);
    for (std::size_t k = 0; k < inc.size(); ++k) v[k + 1] = v[k] + inc[k];
    return grid_path{std::move(v)};
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("occupation_process counts shifted minima inside the window") {
    grid_path p = gp({0, -1, 1, 0});
    interval I = cei::make_interval(-1.5, 0, true, false);
    cei::occupation_profile prof = cei::occupation_process(p, I);
    REQUIRE(prof.m.size() == 3);
    CHECK(prof.m[0] == -1.0);
    CHECK(prof.m[1] == 0.0);
    CHECK(prof.m[2] == -2.0);
    REQUIRE(prof.A.size() == 4);
    CHECK(prof.A[0] == 0.0);
    CHECK(prof.A[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(prof.A[2] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(prof.A[3] == doctest::Approx(2.0 / 3).epsilon(1e-12));

    // Any window reaching 0 is hit by every shifted minimum of a bridge.
    interval all = cei::make_interval(-1e9, 0, true, false);
    cei::rng_stream rng(41001, 0);
    grid_path b = cei::sample_brownian_bridge(64, 0.0, rng);
    cei::occupation_profile full = cei::occupation_process(b, all);
    CHECK(full.A[64] == 1.0);

    // Window strictly below every shifted minimum: empty occupation.
    interval low = cei::make_interval(-9.0, -8.0, false, false);
    cei::occupation_profile empty = cei::occupation_process(p, low);
    CHECK(empty.A[3] == 0.0);

    // A is a nondecreasing step function with increments 0 or 1/n.
    for (std::size_t k = 1; k < full.A.size(); ++k) {
        double step = full.A[k] - full.A[k - 1];
        CHECK(step >= 0.0);
        CHECK((std::abs(step) <= 1e-15 || std::abs(step - 1.0 / 64) <= 1e-15));
    }
}

TEST_CASE("nu_from_occupation selects uniformly by rank") {
    grid_path p = gp({0, -1, -1, 0});
    interval I = cei::make_interval(0, 0, false, false);
    cei::occupation_profile prof = cei::occupation_process(p, I);
    // Occupied cells are {1, 2}.
    CHECK(cei::nu_from_occupation(prof, 0.0) == 1);
    CHECK(cei::nu_from_occupation(prof, 0.49) == 1);
    CHECK(cei::nu_from_occupation(prof, 0.5) == 2);
    CHECK(cei::nu_from_occupation(prof, 0.6) == 2);
    CHECK(cei::nu_from_occupation(prof, 0.999) == 2);

    // Single occupied cell: chosen for every u.
    grid_path q = gp({0, -1, 1, 0});
    interval point = cei::make_interval(-1, -1, false, false);
    cei::occupation_profile single = cei::occupation_process(q, point);
    for (double u : {0.0, 0.3, 0.7, 0.99}) CHECK(cei::nu_from_occupation(single, u) == 0);

    interval low = cei::make_interval(-9.0, -8.0, false, false);
    cei::occupation_profile empty = cei::occupation_process(q, low);
    CHECK(thrown_code([&] { cei::nu_from_occupation(empty, 0.5); }) == cei::errc::empty_occupation);
    CHECK(thrown_code([&] { cei::nu_from_occupation(single, 1.0); }) == cei::errc::out_of_range);
    CHECK(thrown_code([&] { cei::nu_from_occupation(single, -0.1); }) == cei::errc::out_of_range);
}

TEST_CASE("condition_min_transform lands the minimum inside the window") {
    interval I = cei::make_interval(-0.4, -0.1, true, false);
    cei::rng_stream u_rng(41002, 0);
    int hits = 0;
    for (int i = 0; i < 200; ++i) {
        cei::rng_stream rng(41003, i);
        grid_path b = cei::sample_brownian_bridge(128, 0.0, rng);
        cei::shift_result res = cei::condition_min_transform(b, I, u_rng.next_uniform());
        if (!res.conditioning_event) continue;
        ++hits;
        REQUIRE(res.path.has_value());
        CHECK(I.contains(minimum(*res.path)));
        // The result is exactly the cyclic shift at nu_index.
        grid_path direct = cyclic_shift(b, res.nu_index);
        CHECK(res.path->values == direct.values);
    }
    CHECK(hits > 100);  // the window is comfortably reachable at this resolution

    // Tiny-amplitude bridge cannot reach a window needing amplitude >= 1:
    // empty occupation reported as a failed conditioning event.
    grid_path tiny = gp({0, -0.01, 0.01, 0});
    cei::shift_result res = cei::condition_min_transform(tiny, cei::make_interval(-1.5, -1, true, false), 0.5);
    CHECK(!res.conditioning_event);
    CHECK(!res.path.has_value());
    CHECK(res.nu_index == -1);
    CHECK(amplitude(tiny) < 1.0);
}

TEST_CASE("condition_min_transform is exact on the four-step walk") {
    interval point = cei::make_interval(-2, -2, false, false);
    int events = 0;
    for (const auto& inc : all_arrangements({1, 1, -1, -1})) {
        grid_path p = cumsum_path(inc);
        for (double u : {0.0, 0.3, 0.6, 0.9}) {
            cei::shift_result res = cei::condition_min_transform(p, point, u);
            if (res.conditioning_event) {
                CHECK(minimum(*res.path) == -2.0);
                ++events;
            } else {
                // Only the period-2 alternating orbit misses the level -2,
                // and its amplitude stays below -inf I = 2.
                CHECK(amplitude(p) < 2.0);
            }
        }
    }
    CHECK(events == 4 * 4);  // 4 of the 6 arrangements can shift onto min = -2
}

TEST_CASE("vervaat shifts the first minimum to the origin") {
    grid_path p = gp({0, -1, 0.5, 0});
    grid_path v = cei::vervaat(p);
    REQUIRE(v.values.size() == 4);
    CHECK(v.values[0] == 0.0);
    CHECK(v.values[1] == 1.5);
    CHECK(v.values[2] == 1.0);
    CHECK(v.values[3] == 0.0);

    grid_path already = gp({0, 1, 2, 1, 0});
    CHECK(cei::vervaat(already).values == already.values);

    cei::rng_stream rng(41004, 0);
    for (int i = 0; i < 100; ++i) {
        grid_path b = cei::sample_brownian_bridge(96, 0.0, rng);
        grid_path w = cei::vervaat(b);
        for (double val : w.values) CHECK(val >= 0.0);
        CHECK(w.values[0] == 0.0);
        CHECK(w.values[96] == 0.0);
        CHECK(maximum(w) == amplitude(b));
    }
}

TEST_CASE("local_time_estimate_of matches hand-counted bands") {
    std::vector<double> R{1.0, 0.5, 0.5, 1.0};
    cei::local_time_estimate est = cei::local_time_estimate_of(R, 0.5, 0.1);
    REQUIRE(est.L.size() == 4);
    CHECK(est.L[0] == 0.0);
    CHECK(est.L[1] == 0.0);
    CHECK(est.L[2] == doctest::Approx(1.0 / 0.3).epsilon(1e-12));
    CHECK(est.L[3] == doctest::Approx(2.0 / 0.3).epsilon(1e-12));

    std::vector<double> zero(65, 0.0);
    cei::local_time_estimate full = cei::local_time_estimate_of(zero, 0.0, 0.1);
    CHECK(full.L[64] == doctest::Approx(10.0).epsilon(1e-12));

    cei::local_time_estimate none = cei::local_time_estimate_of(R, 5.0, 0.1);
    for (double l : none.L) CHECK(l == 0.0);

    // Nondecreasing with increments 0 or 1/(eps*n).
    cei::rng_stream rng(41005, 0);
    std::vector<double> RR = cei::reflected_process(cei::sample_brownian_bridge(128, 0.0, rng));
    cei::local_time_estimate e2 = cei::local_time_estimate_of(RR, 0.3, 0.05);
    for (std::size_t k = 1; k < e2.L.size(); ++k) {
        double step = e2.L[k] - e2.L[k - 1];
        CHECK(step >= 0.0);
        CHECK((std::abs(step) <= 1e-12 || std::abs(step - 1.0 / (0.05 * 128)) <= 1e-9));
    }
    CHECK(thrown_code([&] { cei::local_time_estimate_of(R, 0.5, 0.0); }) == cei::errc::out_of_range);
}

TEST_CASE("condition_min_value_transform pins the minimum near the level") {
    // R of [0,-1,-1,0] is [1,0,0,1]; level 0 band at eps=0.1 is {1,2}.
    grid_path p = gp({0, -1, -1, 0});
    cei::shift_result first = cei::condition_min_value_transform(p, 0.0, 0.1, 0.0);
    CHECK(first.conditioning_event);
    CHECK(first.nu_index == 1);
    cei::shift_result second = cei::condition_min_value_transform(p, 0.0, 0.1, 0.6);
    CHECK(second.nu_index == 2);
    CHECK(second.path->values == cyclic_shift(p, 2).values);

    // Pathwise band containment: the shifted minimum lies within eps of y.
    const double y = -0.5, eps = 0.1;
    cei::rng_stream u_rng(41006, 0);
    int events = 0;
    for (int i = 0; i < 200; ++i) {
        cei::rng_stream rng(41007, i);
        grid_path b = cei::sample_brownian_bridge(256, 0.0, rng);
        cei::shift_result res = cei::condition_min_value_transform(b, y, eps, u_rng.next_uniform());
        if (!res.conditioning_event) continue;
        ++events;
        double m = minimum(*res.path);
        CHECK(m >= y - eps);
        CHECK(m <= y + eps);
    }
    CHECK(events > 100);

    // Empty band: amplitude far from the level.
    grid_path tiny = gp({0, -0.01, 0.01, 0});
    cei::shift_result none = cei::condition_min_value_transform(tiny, -5.0, 0.05, 0.5);
    CHECK(!none.conditioning_event);

    CHECK(thrown_code([&] { cei::condition_min_value_transform(p, 0.5, 0.1, 0.5); }) ==
          cei::errc::out_of_range);
    CHECK(thrown_code([&] { cei::condition_min_value_transform(p, 0.0, -0.1, 0.5); }) ==
          cei::errc::out_of_range);
    CHECK(thrown_code([&] { cei::condition_min_value_transform(p, 0.0, 0.1, 1.0); }) ==
          cei::errc::out_of_range);
}

TEST_CASE("condition_min_value_transform degenerates to vervaat as the band shrinks") {
    for (int i = 0; i < 20; ++i) {
        cei::rng_stream rng(41008, i);
        grid_path b = cei::sample_brownian_bridge(1024, 0.0, rng);
        cei::shift_result res = cei::condition_min_value_transform(b, 0.0, 1e-9, 0.0);
        REQUIRE(res.conditioning_event);  // the argmin cell always sits in the band
        CHECK(res.nu_index == argmin_first(b));
        CHECK(res.path->values == cei::vervaat(b).values);
    }
}

TEST_CASE("first_passage_transform crosses at the quantile threshold") {
    grid_path p = gp({0, -1, 1, 0});

    // x + min = 0: threshold 0, first strictly positive value is at cell 2.
    cei::shift_result mid = cei::first_passage_transform(p, 1.0, 0.5);
    CHECK(mid.nu_index == 2);
    REQUIRE(mid.path.has_value());
    CHECK(mid.path->values == std::vector<double>{0, -1, -2, 0});

    // The strict inequality keeps the origin cell out even at u = 0.
    CHECK(cei::first_passage_transform(p, 1.0, 0.0).nu_index == 2);

    // Negative threshold: the origin qualifies immediately.
    cei::shift_result ident = cei::first_passage_transform(p, 0.5, 0.5);
    CHECK(ident.nu_index == 0);
    CHECK(ident.path->values == p.values);

    // Positive threshold below the maximum: first crossing of 0.5 is cell 2.
    CHECK(cei::first_passage_transform(p, 2.0, 0.5).nu_index == 2);

    CHECK(thrown_code([&] { cei::first_passage_transform(p, -1.0, 0.5); }) ==
          cei::errc::negative_endpoint);
    CHECK(thrown_code([&] { cei::first_passage_transform(p, 5.0, 0.9); }) == cei::errc::no_passage);
    CHECK(thrown_code([&] { cei::first_passage_transform(p, 1.0, 1.0); }) == cei::errc::out_of_range);

    cei::rng_stream rng(41009, 0);
    for (int i = 0; i < 50; ++i) {
        grid_path b = cei::sample_brownian_bridge(128, 0.0, rng);
        cei::shift_result res = cei::first_passage_transform(b, 1.0, 0.25);
        CHECK(res.path->values == cyclic_shift(b, res.nu_index).values);
        CHECK(res.conditioning_event);
    }
}

TEST_CASE("bes3_to_bridge removes the drift line and pins both ends") {
    cei::rng_stream rng(41010, 0);
    grid_path p = cei::sample_bessel3_process(16, rng);

    grid_path r0 = cei::bes3_to_bridge(p, 0.0);
    CHECK(r0.values[0] == 0.0);
    CHECK(r0.values[16] == 0.0);
    for (int k = 1; k < 16; ++k)
        CHECK(std::abs(r0.values[k] - (p.values[k] - (k / 16.0) * p.values[16])) <= 1e-12);

    // u = 0.3 rounds to shift index 5 at n = 16.
    grid_path r = cei::bes3_to_bridge(p, 0.3);
    grid_path q = cyclic_shift(p, 5);
    for (int k = 1; k < 16; ++k)
        CHECK(std::abs(r.values[k] - (q.values[k] - (k / 16.0) * p.values[16])) <= 1e-12);

    CHECK(thrown_code([&] { cei::bes3_to_bridge(p, 1.0); }) == cei::errc::out_of_range);

    // Marginal law at t = 1/2 agrees with the sampled bridge.
    const int n = 64, count = 4000;
    std::vector<double> transformed, direct;
    for (int i = 0; i < count; ++i) {
        cei::rng_stream ra(41011, i);
        grid_path bes = cei::sample_bessel3_process(n, ra);
        cei::rng_stream ru(41012, i);
        transformed.push_back(cei::bes3_to_bridge(bes, ru.next_uniform()).values[n / 2]);
        cei::rng_stream rb(41013, i);
        direct.push_back(cei::sample_brownian_bridge(n, 0.0, rb).values[n / 2]);
    }
    CHECK(cei::ks_two_sample(transformed, direct, 0.001).passed);
}

}  // TEST_SUITE
