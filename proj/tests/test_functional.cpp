#include "doctest.h"

#include <cmath>
#include <random>

#include "coverwalk/functional.hpp"

using namespace coverwalk;

namespace {
Generator two_state(double a, double b) {
    BooleanMeasure m = make_explicit_real(
        1, {{BitVector::from_string("0"), b / (a + b)},
            {BitVector::from_string("1"), a / (a + b)}});
    return generator_from_rates(m, {{0, 1, a, {}}, {1, 0, b, {}}});
}
}

TEST_SUITE("functional") {

TEST_CASE("forms on a two-state chain match hand values") {
    Generator g = two_state(1.0, 1.0); // pi = (1/2, 1/2)
    Observable f{1.0, 3.0};
    FormReport r = evaluate_forms(g, f);
    // E(f,f) = pi0 a (f1-f0)^2
    CHECK(r.dirichlet_ff == doctest::Approx(2.0));
    CHECK(r.variance == doctest::Approx(1.0));
    CHECK(r.dirichlet_flogf == doctest::Approx((3.0 - 1.0) * std::log(3.0) / 2.0));
    CHECK(r.dirichlet_sqrt ==
          doctest::Approx(std::pow(std::sqrt(3.0) - 1.0, 2) / 2.0));
    // Ent(f) = E[f log f] - E f log E f
    double ent = 0.5 * (1 * std::log(1.0) + 3 * std::log(3.0)) - 2 * std::log(2.0);
    CHECK(r.entropy == doctest::Approx(ent).epsilon(1e-12));
}

TEST_CASE("local pair sums reproduce the dirichlet forms") {
    Generator g = two_state(0.7, 0.3);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        Observable f{u(rng), u(rng)};
        FormReport r = evaluate_forms(g, f);
        CHECK(r.local_ff == doctest::Approx(r.dirichlet_ff).epsilon(1e-12));
        CHECK(r.local_flogf == doctest::Approx(r.dirichlet_flogf).epsilon(1e-12));
        CHECK(r.local_sqrt == doctest::Approx(r.dirichlet_sqrt).epsilon(1e-12));
    }
    CHECK_THROWS_AS(evaluate_forms(g, Observable{1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(evaluate_forms(g, Observable{1.0, -1.0}), DomainError);
}

TEST_CASE("spectral gap of a two-state chain is the total rate") {
    ConstantEstimate e = poincare_exact(two_state(1.3, 0.4));
    CHECK(e.kind == "poincare");
    CHECK(e.exact);
    CHECK(e.value == doctest::Approx(1.7).epsilon(1e-12));
    // the witness attains the reported ratio
    CHECK(ratio_poincare(two_state(1.3, 0.4), e.witness) ==
          doctest::Approx(e.value).epsilon(1e-9));
}

TEST_CASE("sobolev estimates respect the two-state closed forms") {
    double a = 1.1, b = 0.6;
    Generator g = two_state(a, b);
    TwoStateConstants ts = two_state_constants(a, b);

    ConstantEstimate mlsi = sobolev_estimate(g, SobolevKind::Mlsi);
    CHECK(mlsi.kind == "mlsi");
    CHECK(mlsi.value >= ts.alpha_lower - 1e-9);  // estimate upper-bounds alpha
    CHECK(mlsi.value <= ts.alpha_upper + 1e-9);
    CHECK(ratio_mlsi(g, mlsi.witness) == doctest::Approx(mlsi.value).epsilon(1e-12));

    ConstantEstimate lsi = sobolev_estimate(g, SobolevKind::Lsi);
    CHECK(lsi.kind == "lsi");
    CHECK(lsi.value == doctest::Approx(ts.rho).epsilon(1e-3));
    CHECK(lsi.value >= ts.rho - 1e-9); // never below the true constant
}

TEST_CASE("estimates are deterministic given the seed") {
    Generator g = two_state(0.9, 0.5);
    EstimateOptions opts;
    opts.seed = 42;
    ConstantEstimate e1 = sobolev_estimate(g, SobolevKind::Lsi, opts);
    ConstantEstimate e2 = sobolev_estimate(g, SobolevKind::Lsi, opts);
    CHECK(e1.value == e2.value);
    CHECK(e1.witness == e2.witness);
    CHECK(e1.seed == 42);
}

TEST_CASE("two-state closed forms") {
    TwoStateConstants t = two_state_constants(1.5, 0.5);
    CHECK(t.lambda == doctest::Approx(2.0));
    CHECK(t.alpha_lower == doctest::Approx(2.0));
    CHECK(t.alpha_upper == doctest::Approx(4.0));
    CHECK(t.rho == doctest::Approx(1.0 / std::log(3.0)));
    CHECK(t.rho_floor == doctest::Approx(0.5));
    CHECK_FALSE(t.degenerate);

    // equal rates: the ratio limit is the rate itself
    CHECK(two_state_constants(0.8, 0.8).rho == doctest::Approx(0.8));
    CHECK(two_state_constants(1.0, 0.0).degenerate);
    CHECK_THROWS_AS(two_state_constants(-1.0, 1.0), InputError);
}

TEST_CASE("lsi values never exceed the measure ceiling") {
    BooleanMeasure m = make_product({Rational(1, 2), Rational(1, 2)});
    Generator g = build_mcmc(m);
    double ceiling = rho_ceiling(m);
    CHECK(ceiling == doctest::Approx(1.0 / std::log(4.0)));
    ConstantEstimate lsi = sobolev_estimate(g, SobolevKind::Lsi);
    CHECK(lsi.value <= ceiling + 1e-9);
}

} // TEST_SUITE
