#include "doctest.h"

#include <cmath>

#include "coverwalk/chain.hpp"

using namespace coverwalk;

namespace {
BitVector bv(const std::string& s) { return BitVector::from_string(s); }

BooleanMeasure uniform_square() {
    return make_product({Rational(1, 2), Rational(1, 2)});
}
}

TEST_SUITE("chain") {

TEST_CASE("metropolis rates on the uniform square") {
    Generator g = build_mcmc(uniform_square());
    CHECK(g.is_exact());
    // full cube is not homogeneous, so k = n/2 = 1 and every flip pair gets
    // min(1, 1) / (2 k n) = 1/4
    ChainStats st = validate(g);
    CHECK(st.m == doctest::Approx(0.25));
    CHECK(st.M == doctest::Approx(0.25));
    CHECK(*st.M_exact == Rational(1, 4));
    // corner rows exit through two flips, middle rows add the swap
    CHECK(st.delta == doctest::Approx(0.75));
    CHECK(st.flip_swap);
    CHECK(st.normalized);
    CHECK_FALSE(st.pairs_vacuous);
    CHECK(st.reversibility_residual == 0);
    // swaps 10 <-> 01 are rated too
    int i = g.measure().index_of(bv("10"));
    int j = g.measure().index_of(bv("01"));
    CHECK(g.rate(i, j) == doctest::Approx(0.25));
}

TEST_CASE("metropolis rates carry the stationary ratio") {
    BooleanMeasure m = make_product({Rational(1, 4)}); // pi = (3/4, 1/4)
    Generator g = build_mcmc(m);
    // k = n/2 = 1/2, so the normalizer is 2 k n = 1
    CHECK(g.exact_rates()(0, 1) == Rational(1, 3)); // min(pi1/pi0, 1) = 1/3
    CHECK(g.exact_rates()(1, 0) == Rational(1));
    ChainStats st = validate(g);
    CHECK(*st.m_exact == Rational(1, 3));
    CHECK(*st.M_exact == Rational(1));
}

TEST_CASE("homogeneous supports use the common degree") {
    BooleanMeasure m = make_conditioned_sum(
        {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}, 2);
    Generator g = build_mcmc(m);
    // k = 2, n = 4: uniform slice rates are 1/16 on every swap pair
    ChainStats st = validate(g);
    CHECK(*st.M_exact == Rational(1, 16));
    CHECK(*st.m_exact == Rational(1, 16));
    Generator ex = build_bases_exchange(m);
    CHECK(validate(ex).M == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("exchange walk rejects non-uniform and non-homogeneous inputs") {
    CHECK_THROWS_AS(build_bases_exchange(uniform_square()), DomainError);
    CHECK_THROWS_AS(build_bases_exchange(make_conditioned_sum(
                        {Rational(1, 3), Rational(1, 2), Rational(1, 2)}, 1)),
                    DomainError);
}

TEST_CASE("validation catches broken generators") {
    BooleanMeasure m = uniform_square();
    // detailed balance needs equal flux on uniform weights
    std::vector<RateEntry> asym{{0, 1, 0.25, {}}, {1, 0, 0.125, {}}};
    CHECK_THROWS_AS(generator_from_rates(m, asym), ValidationError);
    std::vector<RateEntry> neg{{0, 1, -0.25, {}}, {1, 0, -0.25, {}}};
    CHECK_THROWS_AS(generator_from_rates(m, neg), ValidationError);
    std::vector<RateEntry> diag{{0, 0, 0.25, {}}};
    CHECK_THROWS_AS(generator_from_rates(m, diag), InputError);
}

TEST_CASE("sparse assembly rebuilds the diagonal") {
    BooleanMeasure m = uniform_square();
    std::vector<RateEntry> entries{{0, 1, 0.25, Rational(1, 4)},
                                   {1, 0, 0.25, Rational(1, 4)}};
    Generator g = generator_from_rates(m, entries);
    CHECK(g.rate(0, 0) == doctest::Approx(-0.25));
    CHECK(g.rate(1, 1) == doctest::Approx(-0.25));
    CHECK(g.rate(2, 2) == 0.0);
}

TEST_CASE("normalization scales the worst exit rate to one") {
    Generator g = build_mcmc(uniform_square());
    Generator n = normalize(g);
    ChainStats st = validate(n);
    CHECK(st.delta == doctest::Approx(1.0));
    CHECK(st.normalized);
    CHECK(n.rate(0, 1) == doctest::Approx(1.0 / 3.0)); // (1/4) / (3/4)
}

TEST_CASE("communicating classes split a cut chain") {
    BooleanMeasure m = uniform_square();
    // only the swap pair is connected; 00 and 11 are isolated
    std::vector<RateEntry> entries{{1, 2, 0.25, Rational(1, 4)},
                                   {2, 1, 0.25, Rational(1, 4)}};
    Generator g = generator_from_rates(m, entries);
    auto classes = communicating_classes(g);
    REQUIRE(classes.size() == 3);
    CHECK(classes[0] == std::vector<int>{0});
    CHECK(classes[1] == std::vector<int>{1, 2});
    CHECK(classes[2] == std::vector<int>{3});
    CHECK_THROWS_AS(require_irreducible(g), ValidationError);
    CHECK_NOTHROW(require_irreducible(build_mcmc(m)));
}

TEST_CASE("stats are vacuous without flip or swap pairs") {
    // two states four flips apart: no single move connects them
    BooleanMeasure m = make_explicit_exact(
        4, {{bv("0000"), Rational(1, 2)}, {bv("1111"), Rational(1, 2)}});
    ChainStats st = validate(build_mcmc(m));
    CHECK(st.pairs_vacuous);
    CHECK(std::isinf(st.m));
}

} // TEST_SUITE
