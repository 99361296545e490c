#include "doctest.h"

#include <cmath>

#include "coverwalk/dynamics.hpp"

using namespace coverwalk;

namespace {
Generator symmetric_two_state() {
    BooleanMeasure m = make_product({Rational(1, 2)});
    return generator_from_rates(
        m, {{0, 1, 1.0, Rational(1)}, {1, 0, 1.0, Rational(1)}});
}
}

TEST_SUITE("dynamics") {

TEST_CASE("semigroup of the symmetric two-state chain") {
    Generator g = symmetric_two_state();
    for (double t : {0.0, 0.05, 0.3, 1.0, 4.0}) {
        auto p = evolve(g, 0, t);
        CHECK(p[0] == doctest::Approx(0.5 + 0.5 * std::exp(-2 * t)).epsilon(1e-11));
        CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(evolve(g, 0, -1.0), InputError);
    CHECK_THROWS_AS(evolve(g, 5, 1.0), InputError);
    // the bit-string overload resolves the start index
    auto p = evolve(g, BitVector::from_string("1"), 0.0);
    CHECK(p[1] == 1.0);
}

TEST_CASE("evolution converges to the stationary law") {
    Generator g = build_mcmc(make_product({Rational(1, 3), Rational(2, 3)}));
    auto p = evolve(g, 0, 200.0);
    for (int i = 0; i < g.size(); ++i)
        CHECK(p[static_cast<size_t>(i)] ==
              doctest::Approx(g.measure().weight(i)).epsilon(1e-9));
}

TEST_CASE("total variation basics") {
    CHECK(tv({0.5, 0.5}, {0.5, 0.5}) == 0.0);
    CHECK(tv({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(tv({0.7, 0.3}, {0.5, 0.5}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(tv({1.0}, {0.5, 0.5}), InputError);
}

TEST_CASE("mixing time matches the two-state closed form") {
    Generator g = symmetric_two_state();
    // tv(t) = e^{-2t}/2, so t_mix(eps) = log(1/(2 eps)) / 2
    for (double eps : {0.25, 0.125, 0.05}) {
        double expected = 0.5 * std::log(1.0 / (2 * eps));
        CHECK(mixing_time(g, 0, eps) == doctest::Approx(expected).epsilon(1e-5));
    }
    CHECK(mixing_time(g, 0, 0.05) > mixing_time(g, 0, 0.25));
    CHECK_THROWS_AS(mixing_time(g, 0, 0.0), InputError);
    CHECK_THROWS_AS(mixing_time(g, 0, 1.0), InputError);
}

TEST_CASE("bound formulas evaluate as written") {
    // (1/(2c)) (log(1/pi_x) + log(1/(4 eps^2)))
    BoundReport pi = mixing_bound(BoundKind::Pi, 0.5, 0.1, 0.25);
    CHECK(pi.value == doctest::Approx((std::log(10.0) + std::log(4.0)) / 1.0));
    CHECK_FALSE(pi.floored);

    // (1/c) (log log(1/pi_x) + log(1/(2 eps^2)))
    BoundReport ml = mixing_bound(BoundKind::Mlsi, 1.0, 0.1, 0.25);
    CHECK(ml.value ==
          doctest::Approx(std::log(std::log(10.0)) + std::log(8.0)));
    CHECK_FALSE(ml.floored);

    // pi_x >= 1/e drives the log log negative; it clamps and flags
    BoundReport fl = mixing_bound(BoundKind::Mlsi, 1.0, 0.5, 0.25);
    CHECK(fl.floored);
    CHECK(fl.value == doctest::Approx(std::log(8.0)));

    CHECK_THROWS_AS(mixing_bound(BoundKind::Pi, 0.0, 0.1, 0.25), InputError);
    CHECK_THROWS_AS(mixing_bound(BoundKind::Pi, 0.5, 1.5, 0.25), InputError);
}

TEST_CASE("mixing report carries both certified bounds") {
    Generator g = build_mcmc(make_product({Rational(1, 2), Rational(1, 2)}));
    MixingReport r = mixing_report(g, 0, 0.25);
    CHECK(r.start_state == "00");
    CHECK(r.pi_x == doctest::Approx(0.25));
    REQUIRE(r.bounds.size() == 2);
    CHECK(r.bounds[0].kind == "pi");
    CHECK(r.bounds[0].provenance == "exact");
    CHECK(r.bounds[1].kind == "mlsi");
    CHECK(r.bounds[1].provenance == "certificate");
    for (const auto& b : r.bounds) {
        CHECK(b.value >= r.t_mix); // certified bounds dominate the truth
        CHECK_FALSE(b.violated);
    }
    CHECK_FALSE(r.violation);
}

} // TEST_SUITE
