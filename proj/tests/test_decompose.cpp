#include "doctest.h"

#include <cmath>
#include <random>

#include "coverwalk/decompose.hpp"

using namespace coverwalk;

namespace {
BitVector bv(const std::string& s) { return BitVector::from_string(s); }

Generator square_walk() {
    return build_mcmc(make_product({Rational(1, 2), Rational(1, 2)}));
}
}

TEST_SUITE("decompose") {

TEST_CASE("projection chain of the uniform square") {
    Generator g = square_walk();
    Decomposition d = decompose_at(g, 1);
    CHECK(d.exact);
    CHECK(d.pibar[0] == doctest::Approx(0.5));
    CHECK(d.pibar_exact[0] == Rational(1, 2));
    // average rate out of block x1=0: state 00 crosses at 1/4 (flip), state
    // 01 at 1/4 + 1/4 (flip plus swap)
    CHECK(d.qbar_exact(0, 1) == Rational(3, 8));
    CHECK(d.qbar_exact(1, 0) == Rational(3, 8));
    REQUIRE(d.blocks.size() == 2);
    CHECK(d.blocks[0].size() == 2);
    REQUIRE(d.restrictions.size() == 2);
    // restriction keeps only internal moves, renormalized to the block law
    CHECK(d.restrictions[0].measure().size() == 2);
    CHECK(d.restrictions[0].rate(0, 1) == doctest::Approx(0.25));
    CHECK(d.couplings.count({0, 1}) == 1);
    CHECK(d.couplings.count({1, 0}) == 1);
}

TEST_CASE("coupling quality of the square split") {
    Decomposition d = decompose_at(square_walk(), 1);
    ChiReport r = chi(d);
    // the lemma coupling pairs states of equal remaining coordinate with
    // mass 1/2; the swap flux makes the cross rates exceed the coupled flux
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_FALSE(r.zero);
    REQUIRE_FALSE(r.quads.empty());
    for (const auto& q : r.quads) {
        CHECK(q.ratio >= r.value - 1e-12);
        CHECK(q.crude_floor <= q.ratio + 1e-12);
    }
    CHECK(*r.value_exact == Rational(2, 3));
}

TEST_CASE("manual partitions must cover the support once") {
    Generator g = square_walk();
    CHECK_THROWS_AS(project_restrict(g, {{0, 1}, {1, 2, 3}}), InputError);
    CHECK_THROWS_AS(project_restrict(g, {{0, 1}, {2}}), InputError);
    Decomposition d = project_restrict(g, {{0, 1}, {2, 3}});
    CHECK(d.blocks.size() == 2);
    CHECK(d.couplings.empty()); // none attached yet
    CHECK_THROWS_AS(chi(d), DomainError);
}

TEST_CASE("identities hold at random observables") {
    Generator g = build_mcmc(make_conditioned_sum(
        {Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1, 2)}, 2));
    Decomposition d = decompose_at(g, 3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.5, 2.5);
    for (int trial = 0; trial < 25; ++trial) {
        Observable f(static_cast<size_t>(g.size()));
        for (double& v : f) v = u(rng);
        IdentityReport r = identity_check(d, f);
        CHECK(r.max_residual <= 1e-10);
        CHECK(r.jensen_ff >= -1e-12);
        CHECK(r.jensen_flogf >= -1e-12);
        CHECK(r.jensen_sqrt >= -1e-12);
    }
}

TEST_CASE("lambda certificate of the uniform square") {
    Certificate c = certify_main(square_walk(), Target::Lambda);
    CHECK(c.valid);
    CHECK_FALSE(c.vacuous);
    CHECK(c.exact);
    // M = m = 1/4; the hierarchy upgrade doubles m
    CHECK(c.direct_bound == doctest::Approx(0.25));
    CHECK(c.claimed_bound == doctest::Approx(0.5));
    CHECK(c.claimed_route == "hierarchy");
    CHECK(*c.claimed_bound_exact == Rational(1, 2));
    // the tree recurses to singleton leaves
    REQUIRE(c.root.children.size() == 2);
    CHECK(c.root.coordinate == 1);
    CHECK(c.root.chi == doctest::Approx(2.0 / 3.0));
    CHECK(c.root.children[0].children[0].leaf);
    // every recorded node check passed
    for (const auto& chk : c.checks) CHECK(chk.pass);
    // and the certified value never exceeds the true gap
    CHECK(c.claimed_bound <= poincare_exact(square_walk()).value + 1e-12);
}

TEST_CASE("rho certificate uses the minimum rate route") {
    Certificate c = certify_main(square_walk(), Target::Rho);
    CHECK(c.valid);
    CHECK(c.direct_bound == doctest::Approx(0.25)); // m
    CHECK(c.claimed_bound == doctest::Approx(0.25));
    CHECK(c.claimed_route == "direct");
}

TEST_CASE("certification fails honestly off the covering class") {
    BooleanMeasure bad = make_explicit_exact(2, {{bv("00"), Rational(2, 5)},
                                                 {bv("10"), Rational(1, 10)},
                                                 {bv("01"), Rational(1, 10)},
                                                 {bv("11"), Rational(2, 5)}});
    Certificate c = certify_main(build_mcmc(bad), Target::Lambda);
    CHECK_FALSE(c.valid);
    // the would-be numbers are still reported, flagged untrusted by valid
    CHECK(c.direct_bound == doctest::Approx(0.25));
    bool failing = false;
    for (const auto& chk : c.checks) failing = failing || !chk.pass;
    CHECK(failing);
}

TEST_CASE("synthesized walk of the uniform square") {
    SynthesisResult s = synthesize_flip_swap(make_product({Rational(1, 2), Rational(1, 2)}));
    CHECK(s.per_coordinate.size() == 2);
    CHECK_FALSE(s.homogeneous);
    CHECK(s.delta_bound == doctest::Approx(2.0)); // n in the general case
    CHECK(s.delta <= s.delta_bound + 1e-12);
    ChainStats st = validate(s.averaged);
    CHECK(st.flip_swap);
    REQUIRE(s.normalized.has_value());
    // normalized gap carries the 1/n guarantee
    CHECK(poincare_exact(*s.normalized).value >= 0.5 - 1e-9);
    for (const auto& audit : s.audits) {
        CHECK(audit.chi == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(audit.crude_max <= audit.chi + 1e-12);
        CHECK(audit.marginal_residual <= 1e-12);
        CHECK(audit.diag_ok);
    }
}

TEST_CASE("homogeneous synthesis halves the rate budget") {
    BooleanMeasure m = make_conditioned_sum(
        {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}, 2);
    SynthesisResult s = synthesize_flip_swap(m);
    CHECK(s.homogeneous);
    CHECK(s.delta_bound == doctest::Approx(4.0)); // 2k, k = 2
    CHECK(s.delta <= s.delta_bound + 1e-12);
    REQUIRE(s.normalized.has_value());
    CHECK(poincare_exact(*s.normalized).value >= 1.0 / 4.0 - 1e-9);
}

TEST_CASE("synthesis rejects non-covering measures") {
    BooleanMeasure bad = make_explicit_exact(2, {{bv("00"), Rational(2, 5)},
                                                 {bv("10"), Rational(1, 10)},
                                                 {bv("01"), Rational(1, 10)},
                                                 {bv("11"), Rational(2, 5)}});
    CHECK_THROWS_AS(synthesize_flip_swap(bad), InfeasibleError);
}

} // TEST_SUITE
