#include "doctest.h"

#include <cmath>
#include <map>

#include "coverwalk/measure.hpp"

using namespace coverwalk;

namespace {
BitVector bv(const std::string& s) { return BitVector::from_string(s); }
}

TEST_SUITE("measure") {

TEST_CASE("product law enumerates the cube with independent weights") {
    BooleanMeasure m = make_product({Rational(3, 10), Rational(3, 5)});
    REQUIRE(m.size() == 4);
    CHECK(m.is_exact());
    CHECK(m.exact_weight(m.index_of(bv("00"))) == Rational(7, 25));
    CHECK(m.exact_weight(m.index_of(bv("10"))) == Rational(3, 25));
    CHECK(m.exact_weight(m.index_of(bv("01"))) == Rational(21, 50));
    CHECK(m.exact_weight(m.index_of(bv("11"))) == Rational(9, 50));
    CHECK_FALSE(m.homogeneity().has_value());
    CHECK_THROWS_AS(make_product({Rational(0)}), InputError);
    CHECK_THROWS_AS(make_product({Rational(1)}), InputError);
}

TEST_CASE("conditioned sum is the product law restricted to a slice") {
    std::vector<Rational> p{Rational(3, 10), Rational(3, 5), Rational(4, 5)};
    BooleanMeasure sliced = make_conditioned_sum(p, 1);
    BooleanMeasure prod = make_product(p);
    REQUIRE(sliced.size() == 3);
    CHECK(sliced.homogeneity() == 1);
    // same ratios as the product law on the slice
    Rational total = 0;
    for (int i = 0; i < prod.size(); ++i)
        if (prod.state(i).weight() == 1) total += prod.exact_weight(i);
    for (int i = 0; i < sliced.size(); ++i) {
        int j = prod.index_of(sliced.state(i));
        REQUIRE(j >= 0);
        CHECK(sliced.exact_weight(i) == prod.exact_weight(j) / total);
    }
    CHECK_THROWS_AS(make_conditioned_sum(p, 4), DomainError);
}

TEST_CASE("diagonal L-ensemble equals the matching product law") {
    Matrix<double> L(3, 3, 0.0);
    L(0, 0) = 0.5;
    L(1, 1) = 2.0;
    L(2, 2) = 3.0;
    BooleanMeasure det = make_l_ensemble(L);
    BooleanMeasure prod = make_product(
        {Rational(1, 3), Rational(2, 3), Rational(3, 4)}); // d/(1+d)
    REQUIRE(det.size() == prod.size());
    CHECK_FALSE(det.is_exact());
    for (int i = 0; i < det.size(); ++i) {
        CHECK(det.state(i) == prod.state(i));
        CHECK(det.weight(i) == doctest::Approx(prod.weight(i)).epsilon(1e-12));
    }
}

TEST_CASE("L-ensemble validates shape") {
    Matrix<double> bad(2, 2, 0.0);
    bad(0, 1) = 1.0; // asymmetric
    CHECK_THROWS_AS(make_l_ensemble(bad), ValidationError);
    Matrix<double> indef(2, 2, 0.0);
    indef(0, 1) = indef(1, 0) = 2.0; // eigenvalues +-2
    CHECK_THROWS_AS(make_l_ensemble(indef), ValidationError);
}

TEST_CASE("spanning tree ensembles have the right counts") {
    BooleanMeasure tri = make_spanning_tree(3, {{1, 2}, {2, 3}, {1, 3}});
    CHECK(tri.size() == 3);
    CHECK(tri.homogeneity() == 2);
    CHECK(tri.exact_weight(0) == Rational(1, 3));

    BooleanMeasure cyc =
        make_spanning_tree(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
    CHECK(cyc.size() == 4);

    BooleanMeasure k4 = make_spanning_tree(
        4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    CHECK(k4.size() == 16); // Cayley: 4^2
    CHECK(k4.homogeneity() == 3);

    CHECK_THROWS_AS(make_spanning_tree(4, {{1, 2}, {3, 4}}), DomainError);
}

TEST_CASE("explicit factory validates and renormalizes") {
    CHECK_THROWS_AS(
        make_explicit_exact(1, {{bv("0"), Rational(1)}, {bv("0"), Rational(1)}}),
        InputError);
    CHECK_THROWS_AS(make_explicit_exact(1, {{bv("0"), Rational(0)}}), InputError);
    BooleanMeasure off = make_explicit_exact(
        1, {{bv("0"), Rational(3)}, {bv("1"), Rational(1)}});
    CHECK(off.exact_weight(0) == Rational(3, 4));
    CHECK_FALSE(off.notes().empty()); // mass was 4, materially off 1
}

TEST_CASE("conditioning renumbers and composes") {
    BooleanMeasure m =
        make_product({Rational(3, 10), Rational(3, 5), Rational(4, 5)});
    ConditionResult once = condition(m, {{1, 1}, {3, 0}});
    REQUIRE(once.kept == std::vector<int>{2});
    REQUIRE(once.measure.dim() == 1);
    // independent coordinates: conditioning leaves coordinate 2 untouched
    CHECK(once.measure.exact_weight(once.measure.index_of(bv("1"))) ==
          Rational(3, 5));

    // composing single conditionings matches the joint one
    ConditionResult first = condition(m, {{1, 1}});
    REQUIRE(first.kept == std::vector<int>{2, 3});
    ConditionResult second = condition(first.measure, {{2, 0}}); // old coord 3
    CHECK(second.measure.dim() == 1);
    for (int i = 0; i < second.measure.size(); ++i) {
        int j = once.measure.index_of(second.measure.state(i));
        REQUIRE(j >= 0);
        CHECK(second.measure.exact_weight(i) == once.measure.exact_weight(j));
    }

    CHECK_THROWS_AS(condition(m, {{1, 1}, {2, 0}, {3, 1}}), InputError); // none free
    BooleanMeasure slice = make_conditioned_sum({Rational(1, 2), Rational(1, 2)}, 1);
    CHECK_THROWS_AS(condition(slice, std::map<int, int>{}), InputError);
}

TEST_CASE("conditioning on a null event fails") {
    BooleanMeasure slice = make_conditioned_sum(
        {Rational(1, 2), Rational(1, 2), Rational(1, 2)}, 1);
    // x1 = x2 = 1 has no mass on the one-slice
    CHECK_THROWS_AS(condition(slice, {{1, 1}, {2, 1}}), DomainError);
}

TEST_CASE("split carries exact block masses") {
    BooleanMeasure m = make_conditioned_sum(
        {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}, 2);
    SplitResult s = split(m, 1);
    CHECK(s.exact);
    CHECK(s.pibar_exact[0] == Rational(1, 2));
    CHECK(s.pibar_exact[1] == Rational(1, 2));
    CHECK(s.block0.size() == 3);
    CHECK(s.block1.size() == 3);
    CHECK(s.block0.dim() == 4); // blocks stay on all coordinates
    for (int i = 0; i < s.block1.size(); ++i)
        CHECK(s.block1.state(i).get(1) == 1);

    BooleanMeasure one = make_explicit_exact(
        2, {{bv("10"), Rational(1, 2)}, {bv("11"), Rational(1, 2)}});
    CHECK_THROWS_AS(split(one, 1), DomainError); // block x1=0 is empty
}

TEST_CASE("weights always carry a double view") {
    BooleanMeasure m = make_product({Rational(1, 3)});
    CHECK(m.weight(0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(
        make_explicit_real(1, {{bv("0"), 0.5}, {bv("1"), 0.5}}).exact_weights(),
        DomainError);
}

} // TEST_SUITE
