#include "doctest.h"

#include <cmath>

#include "coverwalk/json_io.hpp"

using namespace coverwalk;

TEST_SUITE("json") {

TEST_CASE("malformed documents are input errors") {
    CHECK_THROWS_AS(parse_json("{", "inline"), InputError);
    CHECK_THROWS_AS(parse_json("", "inline"), InputError);
    CHECK_NOTHROW(parse_json("{\"n\": 1}"));
}

TEST_CASE("measure documents round-trip exactly") {
    auto roundtrip = [](const BooleanMeasure& m) {
        BooleanMeasure back = measure_from_json(measure_to_json(m));
        REQUIRE(back.size() == m.size());
        REQUIRE(back.dim() == m.dim());
        CHECK(back.is_exact() == m.is_exact());
        for (int i = 0; i < m.size(); ++i) {
            CHECK(back.state(i) == m.state(i));
            if (m.is_exact())
                CHECK(back.exact_weight(i) == m.exact_weight(i));
            else // the reload renormalizes, costing at most an ulp
                CHECK(back.weight(i) ==
                      doctest::Approx(m.weight(i)).epsilon(1e-15));
        }
        CHECK(back.homogeneity() == m.homogeneity());
    };
    roundtrip(make_product({Rational(3, 10), Rational(3, 5), Rational(4, 5)}));
    roundtrip(make_conditioned_sum(
        {Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5)}, 2));
    roundtrip(make_spanning_tree(3, {{1, 2}, {2, 3}, {1, 3}}));
    Matrix<double> L(2, 2, 0.0);
    L(0, 0) = 1.25;
    L(1, 1) = 0.75;
    L(0, 1) = L(1, 0) = 0.25;
    roundtrip(make_l_ensemble(L)); // real lane: doubles round-trip via JSON
}

TEST_CASE("each spec kind builds") {
    CHECK(measure_from_json(parse_json(
              R"({"n": 2, "spec": {"kind": "product", "p": ["1/2", 0.25]}})"))
              .size() == 4);
    CHECK(measure_from_json(parse_json(
              R"({"n": 3, "spec": {"kind": "conditioned_sum", "p": ["1/2", "1/2", "1/2"], "k": 2}})"))
              .homogeneity() == 2);
    CHECK(measure_from_json(parse_json(
              R"({"n": 2, "spec": {"kind": "explicit", "states": ["10", "01"],
                  "weights": ["2/3", "1/3"]}})"))
              .is_exact());
    CHECK(measure_from_json(parse_json(
              R"({"n": 3, "spec": {"kind": "spanning_tree", "vertices": 3,
                  "edges": [[1, 2], [2, 3], [1, 3]]}})"))
              .size() == 3);
    CHECK_FALSE(measure_from_json(parse_json(
                    R"({"n": 1, "spec": {"kind": "l_ensemble", "L": [[2.0]]}})"))
                    .is_exact());
}

TEST_CASE("missing or wrong fields name themselves") {
    CHECK_THROWS_WITH_AS(
        measure_from_json(parse_json(R"({"spec": {"kind": "product", "p": [0.5]}})")),
        doctest::Contains("missing the field 'n'"), InputError);
    CHECK_THROWS_AS(
        measure_from_json(parse_json(R"({"n": 2, "spec": {"kind": "nonesuch"}})")),
        InputError);
    CHECK_THROWS_AS(
        measure_from_json(parse_json(
            R"({"n": 3, "spec": {"kind": "product", "p": [0.5]}})")),
        InputError); // n disagrees with the parameter count
    CHECK_THROWS_AS(
        measure_from_json(parse_json(
            R"({"n": 1, "spec": {"kind": "product", "p": ["1e-1"]}})")),
        InputError); // scientific notation stays rejected
}

TEST_CASE("generator documents round-trip on both lanes") {
    BooleanMeasure m = make_conditioned_sum(
        {Rational(1, 2), Rational(1, 3), Rational(1, 4)}, 1);
    Generator g = build_mcmc(m);
    Generator back = generator_from_json(generator_to_json(g));
    REQUIRE(back.size() == g.size());
    CHECK(back.is_exact());
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j)
            CHECK(back.exact_rates()(i, j) == g.exact_rates()(i, j));

    Matrix<double> L(2, 2, 0.0);
    L(0, 0) = 2.0;
    L(1, 1) = 0.5;
    L(0, 1) = L(1, 0) = 0.5;
    Generator gr = build_mcmc(make_l_ensemble(L));
    Generator backr = generator_from_json(generator_to_json(gr));
    CHECK_FALSE(backr.is_exact()); // fractional rates keep the real lane
    for (int i = 0; i < gr.size(); ++i)
        for (int j = 0; j < gr.size(); ++j)
            CHECK(backr.rate(i, j) == gr.rate(i, j));
}

TEST_CASE("generator reader validates the document") {
    // rates breaking detailed balance are rejected on load
    CHECK_THROWS_AS(
        generator_from_json(parse_json(
            R"({"n": 1, "support": ["0", "1"], "weights": ["1/2", "1/2"],
                "rates": [{"from": "0", "to": "1", "rate": "1"},
                          {"from": "1", "to": "0", "rate": "2"}]})")),
        ValidationError);
    CHECK_THROWS_AS(
        generator_from_json(parse_json(
            R"({"n": 1, "support": ["0", "1"], "weights": ["1/2", "1/2"],
                "rates": [{"from": "0", "to": "11", "rate": "1"}]})")),
        InputError);
}

TEST_CASE("observables align with the support") {
    BooleanMeasure m = make_product({Rational(1, 2), Rational(1, 2)});
    Observable f = observable_from_json(parse_json("[1, 2, 3, 4]"), m);
    CHECK(f == Observable{1.0, 2.0, 3.0, 4.0});
    Observable g = observable_from_json(
        parse_json(R"({"values": [1, 2, 3, 4]})"), m);
    CHECK(g == f);
    CHECK_THROWS_AS(observable_from_json(parse_json("[1, 2]"), m), InputError);
    CHECK_THROWS_AS(observable_from_json(parse_json(R"({"values": "x"})"), m),
                    InputError);
}

TEST_CASE("non-finite numbers serialize as strings") {
    CHECK(json_number(1.5) == Json(1.5));
    CHECK(json_number(std::numeric_limits<double>::infinity()) == Json("inf"));
    CHECK(json_number(-std::numeric_limits<double>::infinity()) == Json("-inf"));
    CHECK(json_number(std::nan("")) == Json("nan"));
}

TEST_CASE("reports serialize deterministically") {
    BooleanMeasure m = make_product({Rational(1, 3), Rational(1, 4)});
    Json a = measure_to_json(m);
    Json b = measure_to_json(m);
    CHECK(dump_report(a) == dump_report(b));
    CHECK(dump_report(a).back() == '\n');
}

} // TEST_SUITE
