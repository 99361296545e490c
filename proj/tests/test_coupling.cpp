#include "doctest.h"

#include "coverwalk/coupling.hpp"
#include "coverwalk/measure.hpp"
#include "coverwalk/negdep.hpp"

using namespace coverwalk;

namespace {
BitVector bv(const std::string& s) { return BitVector::from_string(s); }
}

TEST_SUITE("coupling") {

TEST_CASE("factory enforces the declared relation") {
    std::vector<BitVector> left{bv("10")};
    std::vector<BitVector> right{bv("01")};
    Matrix<double> mass(1, 1, 1.0);
    // 10 does not cover 01
    CHECK_THROWS_AS(Coupling::real(left, right, mass, Relation::Cover),
                    ValidationError);
    // but the pair is a swap
    Coupling c = Coupling::real(left, right, mass, Relation::FlipSwap);
    CHECK(c.relation() == Relation::FlipSwap);
    CHECK(c.mass(0, 0) == 1.0);
}

TEST_CASE("marginals and transpose agree") {
    std::vector<BitVector> left{bv("11"), bv("10")};
    std::vector<BitVector> right{bv("10"), bv("00")};
    Matrix<Rational> mass(2, 2, Rational(0));
    mass(0, 0) = Rational(1, 2); // 11 covers 10
    mass(1, 1) = Rational(1, 3); // 10 covers 00
    mass(1, 0) = Rational(1, 6); // 10 covers 10
    Coupling c = Coupling::exact(left, right, mass, Relation::Cover);
    CHECK(c.is_exact());
    auto lm = c.left_marginal();
    auto rm = c.right_marginal();
    CHECK(lm[0] == doctest::Approx(0.5));
    CHECK(lm[1] == doctest::Approx(0.5));
    CHECK(rm[0] == doctest::Approx(2.0 / 3.0));
    CHECK(rm[1] == doctest::Approx(1.0 / 3.0));

    Coupling t = c.transposed();
    CHECK(t.left_support()[0] == right[0]);
    CHECK(t.mass(0, 1) == doctest::Approx(1.0 / 6.0));
    CHECK(t.left_marginal() == rm);
}

TEST_CASE("cover coupling exists exactly when transport is feasible") {
    // point mass at 1 covers point mass at 0
    BooleanMeasure hi = make_explicit_exact(1, {{bv("1"), Rational(1)}});
    BooleanMeasure lo = make_explicit_exact(1, {{bv("0"), Rational(1)}});
    CoverAttempt ok = try_cover_coupling(hi, lo);
    REQUIRE(ok.coupling.has_value());
    CHECK(ok.coupling->mass(0, 0) == 1.0);
    CHECK(ok.obstruction.empty());

    CoverAttempt bad = try_cover_coupling(lo, hi);
    CHECK_FALSE(bad.coupling.has_value());
    CHECK_FALSE(bad.obstruction.empty());
}

TEST_CASE("cover coupling marginals match the coupled laws") {
    BooleanMeasure mu = make_product({Rational(2, 3), Rational(2, 3)});
    BooleanMeasure nu = make_product({Rational(1, 3), Rational(1, 3)});
    // higher marginals cover lower ones for product laws
    CoverAttempt a = try_cover_coupling(mu, nu);
    REQUIRE(a.coupling.has_value());
    const Coupling& c = *a.coupling;
    CHECK(c.is_exact());
    auto lm = c.left_marginal();
    auto rm = c.right_marginal();
    for (size_t i = 0; i < lm.size(); ++i) {
        int j = mu.index_of(c.left_support()[static_cast<int>(i)]);
        CHECK(lm[i] == doctest::Approx(mu.weight(j)).epsilon(1e-14));
    }
    for (size_t i = 0; i < rm.size(); ++i) {
        int j = nu.index_of(c.right_support()[static_cast<int>(i)]);
        CHECK(rm[i] == doctest::Approx(nu.weight(j)).epsilon(1e-14));
    }
    // determinism: the augmenting construction is order-defined
    CoverAttempt b = try_cover_coupling(mu, nu);
    REQUIRE(b.coupling.has_value());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(a.coupling->mass(i, j) == b.coupling->mass(i, j));
}

} // TEST_SUITE
