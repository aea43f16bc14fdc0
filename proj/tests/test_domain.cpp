#include <doctest.h>

#include <cmath>

#include "pevsim/domain.hpp"

using namespace pevsim;

TEST_SUITE("domain") {

TEST_CASE("preference weights accept convex tuples") {
    CHECK_NOTHROW(PreferenceWeights(1.0, 0.0, 0.0));
    CHECK_NOTHROW(PreferenceWeights(1.0 / 3, 1.0 / 3, 1.0 / 3));
    CHECK_NOTHROW(validate_weights(PreferenceWeights(0.5, 0.3, 0.2)));
}

TEST_CASE("preference weights reject non-convex tuples") {
    CHECK_THROWS_AS(PreferenceWeights(0.5, 0.6, -0.1), NonConvexWeights);
    CHECK_THROWS_AS(PreferenceWeights(0.5, 0.6, 0.1), NonConvexWeights);
    CHECK_THROWS_AS(PreferenceWeights(-0.2, 0.6, 0.6), NonConvexWeights);
}

TEST_CASE("random tuples validate exactly when convex") {
    Rng rng(7);
    std::uniform_real_distribution<double> u(-0.2, 1.2);
    for (int i = 0; i < 2000; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const bool convex = a >= 0 && b >= 0 && c >= 0 && std::abs(a + b + c - 1.0) <= 1e-9;
        if (convex) {
            CHECK_NOTHROW(PreferenceWeights(a, b, c));
        } else {
            CHECK_THROWS_AS(PreferenceWeights(a, b, c), NonConvexWeights);
        }
        // also exercise normalized tuples, which should always pass
        const double s = std::abs(a) + std::abs(b) + std::abs(c);
        if (s > 0) CHECK_NOTHROW(PreferenceWeights(std::abs(a) / s, std::abs(b) / s, std::abs(c) / s));
    }
}

TEST_CASE("energy requests live in (0, max]") {
    CHECK(make_energy_request(5.0).amount_kwh == 5.0);
    CHECK_THROWS_AS(make_energy_request(0.0), DomainError);
    CHECK_THROWS_AS(make_energy_request(9.0), DomainError);
    CHECK_NOTHROW(make_energy_request(9.0, 10.0));
}

TEST_CASE("energy sampling stays in range and matches truncated-gaussian theory") {
    Rng rng(42);
    const double mean = 5.0, sd = 1.2, lo = 1.0, hi = 8.0;
    const int n = 10000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double draw = sample_energy_request(rng, mean, sd, lo, hi).amount_kwh;
        REQUIRE(draw >= lo);
        REQUIRE(draw <= hi);
        sum += draw;
        sq += draw * draw;
    }
    const double sample_mean = sum / n;
    const double sample_var = sq / n - sample_mean * sample_mean;

    // doubly truncated normal moments
    const auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
    const auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    const double a = (lo - mean) / sd, b = (hi - mean) / sd;
    const double Z = Phi(b) - Phi(a);
    const double theory_mean = mean + sd * (phi(a) - phi(b)) / Z;
    const double theory_var =
        sd * sd *
        (1.0 + (a * phi(a) - b * phi(b)) / Z - std::pow((phi(a) - phi(b)) / Z, 2));

    const double se_mean = std::sqrt(theory_var / n);
    CHECK(std::abs(sample_mean - theory_mean) < 3.0 * se_mean);
    const double se_sd = std::sqrt(theory_var) / std::sqrt(2.0 * n);
    CHECK(std::abs(std::sqrt(sample_var) - std::sqrt(theory_var)) < 3.0 * se_sd);
    CHECK(std::abs(sample_mean - 5.0) < 0.1); // long-run mean ~ 5 kWh
}

TEST_CASE("zero-sd sampling degenerates to the mean") {
    Rng rng(1);
    for (int i = 0; i < 5; ++i) {
        CHECK(sample_energy_request(rng, 5.0, 0.0, 1.0, 8.0).amount_kwh == 5.0);
    }
}

TEST_CASE("sampling is reproducible under seeding") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_energy_request(a, 5.0, 1.2, 1.0, 8.0).amount_kwh ==
              sample_energy_request(b, 5.0, 1.2, 1.0, 8.0).amount_kwh);
    }
}

TEST_CASE("pv generation follows the daylight half-sine") {
    Rng rng(9);
    const auto series =
        realize_generation(RenewableProfile{RenewableKind::pv, 10.0}, 3600.0, 0.0, 3600.0, rng);
    CHECK(series.power_kw(0.0) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(series.power_kw(1800.0) == doctest::Approx(10.0).epsilon(1e-3));
    // closed-form integral of the half-sine: nominal * 2/pi * span, in kWh
    const double expected = 10.0 * (2.0 / M_PI) * 3600.0 / 3600.0;
    CHECK(series.total_energy_kwh() == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("wind generation is bounded and seeded") {
    Rng a(5), b(5), c(6);
    const RenewableProfile wind{RenewableKind::wind, 5.0};
    const auto s1 = realize_generation(wind, 7200.0, 0.0, 7200.0, a);
    const auto s2 = realize_generation(wind, 7200.0, 0.0, 7200.0, b);
    const auto s3 = realize_generation(wind, 7200.0, 0.0, 7200.0, c);
    bool differs = false;
    for (int t = 0; t < 7200; t += 60) {
        CHECK(s1.power_kw(t) >= 0.0);
        CHECK(s1.power_kw(t) <= 5.0);
        CHECK(s1.power_kw(t) == s2.power_kw(t));
        if (s1.power_kw(t) != s3.power_kw(t)) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("none profiles generate nothing") {
    Rng rng(1);
    const auto series =
        realize_generation(RenewableProfile{RenewableKind::none, 0.0}, 1000.0, 0.0, 1000.0, rng);
    CHECK(series.total_energy_kwh() == 0.0);
}

TEST_CASE("generation windows clamp and interpolate") {
    Rng rng(3);
    const auto series =
        realize_generation(RenewableProfile{RenewableKind::pv, 10.0}, 1000.0, 0.0, 1000.0, rng);
    CHECK(series.energy_kwh(-100.0, 0.0) == 0.0);
    CHECK(series.energy_kwh(1000.0, 5000.0) == 0.0);
    CHECK(series.energy_kwh(200.0, 200.0) == 0.0);
    const double whole = series.energy_kwh(0.0, 1000.0);
    const double split = series.energy_kwh(0.0, 333.5) + series.energy_kwh(333.5, 1000.0);
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("sim params validate positivity") {
    SimParams p;
    CHECK_NOTHROW(p.validate());
    p.m_max_s = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

} // TEST_SUITE
