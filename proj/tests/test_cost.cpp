#include <doctest.h>

#include "pevsim/cost.hpp"

using namespace pevsim;

namespace {

SimParams paper_params() {
    SimParams p;
    p.charge_rate_kwh_per_s = 0.0061;
    p.m_max_s = 3600.0;
    p.d_max = std::sqrt(2.0);
    return p;
}

} // namespace

TEST_SUITE("cost") {

TEST_CASE("time component reproduces the max-request charge time") {
    const SimParams p = paper_params();
    const double t = time_component(0.0, 8.0, 0.0, p);
    CHECK(t == doctest::Approx(0.3642987249544626).epsilon(1e-12));
    // raw charge time for 8 kWh is about 1300 s
    CHECK(t * p.m_max_s == doctest::Approx(1311.4754).epsilon(1e-4));
}

TEST_CASE("time component hand-evaluated with queue and travel") {
    const SimParams p = paper_params();
    CHECK(time_component(10.0, 5.0, 300.0, p) ==
          doctest::Approx(0.7664).epsilon(1e-4));
    CHECK(time_component(0.0, 0.0, 0.0, p) == 0.0);
}

TEST_CASE("price in euro follows the renewable discount") {
    CHECK(price_eur(5.0, 0.0, 0.45) == doctest::Approx(2.25));
    CHECK(price_eur(5.0, 5.0, 0.45) == 0.0);
    CHECK(price_eur(5.0, 9.0, 0.45) == 0.0);
}

TEST_CASE("normalized price stays in [0,1]") {
    CHECK(price_component(5.0, 2.0) == doctest::Approx(0.6));
    CHECK(price_component(5.0, 5.0) == 0.0);
    CHECK(price_component(5.0, 0.0) == 1.0);
    CHECK_THROWS_AS(price_component(0.0, 1.0), ZeroRequest);
}

TEST_CASE("distance component normalizes by d_max") {
    CHECK(distance_component(0.0, std::sqrt(2.0)) == 0.0);
    CHECK(distance_component(std::sqrt(2.0), std::sqrt(2.0)) == 1.0);
    CHECK(distance_component(0.7071, std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("aggregate is the weighted sum of the components") {
    const auto c = aggregate_cost(PreferenceWeights(1.0 / 3, 1.0 / 3, 1.0 / 3), 0.364, 1.0, 0.5);
    CHECK(c.aggregate == doctest::Approx(0.6213).epsilon(1e-4));
    CHECK(c.t_component == 0.364);
    CHECK(c.p_component == 1.0);
    CHECK(c.d_component == 0.5);
}

TEST_CASE("only-price preference with free energy costs nothing") {
    const SimParams p = paper_params();
    const auto c = aggregate_cost(PreferenceWeights(0.0, 1.0, 0.0), 5.0, 40.0, 9.0,
                                  TravelEstimate{1.0, 50.0}, p);
    CHECK(c.aggregate == 0.0);
}

TEST_CASE("only-distance preference at d_max costs one") {
    const SimParams p = paper_params();
    const auto c = aggregate_cost(PreferenceWeights(0.0, 0.0, 1.0), 5.0, 0.0, 0.0,
                                  TravelEstimate{p.d_max, p.d_max / 0.02}, p);
    CHECK(c.aggregate == 1.0);
}

TEST_CASE("zero-weight insensitivity") {
    const SimParams p = paper_params();
    Rng rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double queued = 30.0 * u(rng);
        const double res = 8.0 * u(rng);
        const double dist = p.d_max * u(rng);
        const TravelEstimate travel{dist, dist / 0.02};
        // time-only drivers ignore price and distance perturbations
        const auto base = aggregate_cost(PreferenceWeights(1, 0, 0), 5.0, queued, res, travel, p);
        const TravelEstimate travel2{p.d_max * u(rng), travel.travel_time_s};
        const auto perturbed =
            aggregate_cost(PreferenceWeights(1, 0, 0), 5.0, queued, 8.0 * u(rng), travel2, p);
        CHECK(base.aggregate == perturbed.aggregate);
    }
}

TEST_CASE("monotonicity in the weighted raw inputs") {
    const SimParams p = paper_params();
    Rng rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double w1 = u(rng), w2 = u(rng) * (1.0 - w1);
        const PreferenceWeights w(w1, w2, 1.0 - w1 - w2);
        const double queued = 30.0 * u(rng), res = 6.0 * u(rng), dist = u(rng);
        const TravelEstimate travel{dist, dist / 0.02};
        const auto base = aggregate_cost(w, 5.0, queued, res, travel, p);
        const auto more_queue = aggregate_cost(w, 5.0, queued + 1.0, res, travel, p);
        CHECK(more_queue.aggregate >= base.aggregate);
        const auto less_res = aggregate_cost(w, 5.0, queued, res * 0.5, travel, p);
        CHECK(less_res.aggregate >= base.aggregate);
        const TravelEstimate farther{dist + 0.1, (dist + 0.1) / 0.02};
        const auto more_dist = aggregate_cost(w, 5.0, queued, res, farther, p);
        CHECK(more_dist.aggregate >= base.aggregate);
    }
}

TEST_CASE("aggregate is affine in the weights") {
    Rng rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double t = 2.0 * u(rng), pr = u(rng), d = u(rng);
        const double a = u(rng), b = u(rng) * (1.0 - a);
        const PreferenceWeights w1(a, b, 1.0 - a - b);
        const PreferenceWeights w2(1.0 - a - b, a, b);
        const double lambda = u(rng);
        const PreferenceWeights mix(
            lambda * w1.alpha_time() + (1 - lambda) * w2.alpha_time(),
            lambda * w1.alpha_price() + (1 - lambda) * w2.alpha_price(),
            lambda * w1.alpha_dist() + (1 - lambda) * w2.alpha_dist());
        const double f1 = aggregate_cost(w1, t, pr, d).aggregate;
        const double f2 = aggregate_cost(w2, t, pr, d).aggregate;
        const double fm = aggregate_cost(mix, t, pr, d).aggregate;
        CHECK(fm == doctest::Approx(lambda * f1 + (1 - lambda) * f2).epsilon(1e-12));
    }
}

} // TEST_SUITE
