#include "doctest.h"

#include <cmath>

#include "coverwalk/concentration.hpp"
#include "coverwalk/decompose.hpp"

using namespace coverwalk;

namespace {
BitVector bv(const std::string& s) { return BitVector::from_string(s); }
}

TEST_SUITE("concentration") {

TEST_CASE("one-sided quadratic variation") {
    BooleanMeasure m = make_product({Rational(1, 2)});
    Generator g = generator_from_rates(
        m, {{0, 1, 1.0, Rational(1)}, {1, 0, 1.0, Rational(1)}});
    // from 0 the only upward move gains 1; from 1 there is none
    CHECK(quad_variation(g, {0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(quad_variation(g, {1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(quad_variation(g, {0.5, 0.5}) == 0.0);
}

TEST_CASE("lipschitz constant over support pairs") {
    BooleanMeasure m = make_product({Rational(1, 2), Rational(1, 2)});
    // f = 2 x1: slope 2 across coordinate-1 flips
    Observable f{0.0, 2.0, 0.0, 2.0};
    CHECK(lipschitz_constant(f, m) == doctest::Approx(2.0));
    Observable g{0.0, 1.0, 1.0, 2.0};
    CHECK(lipschitz_constant(g, m) == doctest::Approx(1.0));
    BooleanMeasure single = make_explicit_exact(1, {{bv("0"), Rational(1)}});
    CHECK_THROWS_AS(lipschitz_constant({1.0}, single), DomainError);
}

TEST_CASE("sub-gaussian tails hold with a certified constant") {
    BooleanMeasure m = make_product({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    Generator g = build_mcmc(m);
    Certificate c = certify_main(g, Target::Alpha);
    REQUIRE(c.valid);
    Observable f;
    for (int i = 0; i < m.size(); ++i)
        f.push_back(static_cast<double>(m.state(i).weight()));
    TailReport r = herbst_check(g, f, c.claimed_bound);
    CHECK(r.kind == "herbst");
    CHECK(r.all_pass);
    CHECK_FALSE(r.vacuous);
    CHECK(r.alpha_lb == doctest::Approx(c.claimed_bound));
    CHECK(r.v > 0);
    REQUIRE(r.points.size() == 16);
    for (const auto& pt : r.points) {
        CHECK(pt.pass);
        CHECK(pt.bound == doctest::Approx(std::exp(-r.alpha_lb * pt.a * pt.a /
                                                   (4 * r.v))));
        CHECK(pt.margin == doctest::Approx(pt.bound - pt.exact));
    }
}

TEST_CASE("constant observables make the tail bound vacuous") {
    BooleanMeasure m = make_product({Rational(1, 2)});
    Generator g = build_mcmc(m);
    TailReport r = herbst_check(g, {1.0, 1.0}, 0.5);
    CHECK(r.vacuous);
    CHECK(r.all_pass);
}

TEST_CASE("homogeneous tail bound rescales steep observables") {
    BooleanMeasure m = make_conditioned_sum(
        {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}, 2);
    // slices have no flip pairs, so the slope is read across swaps:
    // moving the 1 out of coordinate 1 drops f by 4 over distance 2
    Observable f;
    for (int i = 0; i < m.size(); ++i)
        f.push_back(4.0 * m.state(i).get(1) + m.state(i).get(2));
    TailReport r = pemantle_peres_check(m, f);
    CHECK(r.kind == "pemantle-peres");
    CHECK(r.k == 2);
    CHECK(r.lipschitz == doctest::Approx(2.0));
    CHECK(r.rescaled);
    CHECK(r.all_pass);
    for (const auto& pt : r.points)
        CHECK(pt.bound == doctest::Approx(std::exp(-pt.a * pt.a / (8 * r.k))));
}

TEST_CASE("homogeneity is required for the lipschitz tail") {
    BooleanMeasure cube = make_product({Rational(1, 2), Rational(1, 2)});
    CHECK_THROWS_AS(pemantle_peres_check(cube, {0.0, 1.0, 1.0, 2.0}),
                    DomainError);
}

} // TEST_SUITE
