#include "doctest.h"

#include "coverwalk/measure.hpp"
#include "coverwalk/negdep.hpp"

using namespace coverwalk;

namespace {
BitVector bv(const std::string& s) { return BitVector::from_string(s); }

BooleanMeasure positively_correlated() {
    // diagonal pair weighted up: conditioning x1 = 1 pulls x2 up, which
    // breaks the covering property
    return make_explicit_exact(2, {{bv("00"), Rational(2, 5)},
                                   {bv("10"), Rational(1, 10)},
                                   {bv("01"), Rational(1, 10)},
                                   {bv("11"), Rational(2, 5)}});
}
}

TEST_SUITE("scp") {

TEST_CASE("product laws pass the full check") {
    BooleanMeasure m =
        make_product({Rational(3, 10), Rational(3, 5), Rational(4, 5)});
    SCPReport r = check_scp(m);
    CHECK(r.holds);
    CHECK(r.mode == "full");
    CHECK(r.checked_triples > 0);
    CHECK_FALSE(r.witness.has_value());
}

TEST_CASE("slices and tree ensembles pass") {
    CHECK(check_scp(make_conditioned_sum(
                        {Rational(1, 2), Rational(1, 2), Rational(1, 2),
                         Rational(1, 2), Rational(1, 2)},
                        2))
              .holds);
    CHECK(check_scp(make_spanning_tree(3, {{1, 2}, {2, 3}, {1, 3}})).holds);
}

TEST_CASE("positive correlation is rejected with a witness") {
    SCPReport r = check_scp(positively_correlated());
    REQUIRE_FALSE(r.holds);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->S == std::vector<int>{1});
    CHECK(r.witness->x == "1");
    CHECK(r.witness->y == "0");
    CHECK_FALSE(r.witness->obstruction.empty());
}

TEST_CASE("sampled mode is deterministic given the seed") {
    BooleanMeasure m = make_conditioned_sum(
        std::vector<Rational>(6, Rational(1, 2)), 3);
    ScpOptions opts;
    opts.mode = ScpMode::Sampled;
    opts.seed = 7;
    opts.samples = 500;
    SCPReport a = check_scp(m, opts);
    SCPReport b = check_scp(m, opts);
    CHECK(a.holds);
    CHECK(a.checked_triples == b.checked_triples);
    CHECK(a.seed == 7);

    SCPReport bad = check_scp(positively_correlated(), opts);
    CHECK_FALSE(bad.holds); // one triple exists; sampling must hit it
}

TEST_CASE("full mode refuses oversized supports") {
    std::vector<Rational> p(11, Rational(1, 2));
    CHECK_THROWS_AS(check_scp(make_product(p)), DomainError);
}

TEST_CASE("stored couplings have the right marginal masses") {
    ScpOptions opts;
    opts.store_couplings = true;
    SCPReport r = check_scp(make_product({Rational(1, 3), Rational(1, 4)}), opts);
    REQUIRE(r.holds);
    REQUIRE_FALSE(r.couplings.empty());
    for (const auto& sc : r.couplings) {
        double total = 0;
        const Coupling& c = sc.coupling;
        for (int i = 0; i < static_cast<int>(c.left_support().size()); ++i)
            for (int j = 0; j < static_cast<int>(c.right_support().size()); ++j) {
                if (c.mass(i, j) > 0)
                    CHECK(covers(c.left_support()[static_cast<size_t>(i)],
                                 c.right_support()[static_cast<size_t>(j)]));
                total += c.mass(i, j);
            }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("flip-swap coupling couples the two block conditionals") {
    BooleanMeasure m = make_conditioned_sum(
        {Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5)}, 2);
    Coupling c = flip_swap_coupling(m, 2);
    CHECK(c.relation() == Relation::FlipSwap);
    SplitResult s = split(m, 2);
    auto lm = c.left_marginal();
    for (size_t i = 0; i < lm.size(); ++i) {
        int j = s.block0.index_of(c.left_support()[static_cast<int>(i)]);
        REQUIRE(j >= 0);
        CHECK(lm[i] == doctest::Approx(s.block0.weight(j)).epsilon(1e-12));
    }
    auto rm = c.right_marginal();
    for (size_t i = 0; i < rm.size(); ++i) {
        int j = s.block1.index_of(c.right_support()[static_cast<int>(i)]);
        REQUIRE(j >= 0);
        CHECK(rm[i] == doctest::Approx(s.block1.weight(j)).epsilon(1e-12));
    }
    // every coupled pair is one move apart
    for (int i = 0; i < static_cast<int>(c.left_support().size()); ++i)
        for (int j = 0; j < static_cast<int>(c.right_support().size()); ++j)
            if (c.mass(i, j) > 0)
                CHECK(flip_or_swap(c.left_support()[static_cast<size_t>(i)],
                                   c.right_support()[static_cast<size_t>(j)]));
}

TEST_CASE("flip-swap coupling handles a single coordinate") {
    BooleanMeasure m = make_product({Rational(1, 3)});
    Coupling c = flip_swap_coupling(m, 1);
    CHECK(c.mass(0, 0) == 1.0);
    CHECK(c.left_support()[0] == bv("0"));
    CHECK(c.right_support()[0] == bv("1"));
}

TEST_CASE("non-covering measures have no flip-swap coupling") {
    CHECK_THROWS_AS(flip_swap_coupling(positively_correlated(), 1),
                    InfeasibleError);
}

} // TEST_SUITE
