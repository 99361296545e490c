#include "coverwalk/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

#include "coverwalk/chain.hpp"
#include "coverwalk/concentration.hpp"
#include "coverwalk/decompose.hpp"
#include "coverwalk/dynamics.hpp"
#include "coverwalk/errors.hpp"
#include "coverwalk/functional.hpp"
#include "coverwalk/negdep.hpp"

namespace coverwalk {

namespace {

// Raw-draw uniform variates: identical streams on every platform, unlike
// std::uniform_real_distribution.
double unit(std::mt19937_64& r) { return static_cast<double>(r() >> 11) * 0x1.0p-53; }
double sym(std::mt19937_64& r) { return 2.0 * unit(r) - 1.0; }

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    return base ^ (0x9e3779b97f4a7c15ull * (salt + 1));
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
}

/// Collects check outcomes for one criterion; failure details are capped so a
/// systematic breakage cannot flood the report.
struct Checker {
    CriterionResult res;

    Checker(int id, std::string name) {
        res.id = id;
        res.name = std::move(name);
    }

    void check(bool ok, const std::string& what) {
        ++res.checks;
        if (ok) return;
        ++failures;
        if (failures <= 50)
            res.details.push_back(what);
        else if (failures == 51)
            res.details.push_back("... further failures suppressed");
    }

    CriterionResult finish(const std::string& summary) {
        res.pass = failures == 0;
        if (res.pass) res.details.push_back(summary);
        return std::move(res);
    }

    long failures = 0;
};

Generator two_state_real(double a, double b) {
    std::vector<BitVector> st{BitVector(1, 0), BitVector(1, 1)};
    BooleanMeasure m = BooleanMeasure::real(1, std::move(st), {b / (a + b), a / (a + b)});
    Matrix<double> q(2, 2);
    q(0, 0) = -a;
    q(0, 1) = a;
    q(1, 0) = b;
    q(1, 1) = -b;
    return Generator::real(std::move(m), std::move(q));
}

Generator two_state_symmetric_exact() {
    std::vector<BitVector> st{BitVector(1, 0), BitVector(1, 1)};
    BooleanMeasure m =
        BooleanMeasure::exact(1, std::move(st), {Rational(1, 2), Rational(1, 2)});
    Matrix<Rational> q(2, 2);
    q(0, 0) = Rational(-1);
    q(0, 1) = Rational(1);
    q(1, 0) = Rational(1);
    q(1, 1) = Rational(-1);
    return Generator::exact(std::move(m), std::move(q));
}

/// Random observable with Lipschitz constant exactly 1 over support pairs.
Observable random_lipschitz(const BooleanMeasure& m, std::mt19937_64& rng) {
    Observable f(static_cast<size_t>(m.size()));
    double lip = 0;
    do {
        for (auto& v : f) v = sym(rng);
        lip = lipschitz_constant(f, m);
    } while (lip < 1e-9);
    for (auto& v : f) v /= lip;
    return f;
}

// ---- criteria --------------------------------------------------------------

CriterionResult two_state_forms(std::uint64_t seed) {
    Checker c(1, "two-state closed forms");
    std::mt19937_64 rng(mix_seed(seed, 1));
    for (int trial = 0; trial < 25; ++trial) {
        double a = 0.2 + 2.8 * unit(rng);
        double b = 0.2 + 2.8 * unit(rng);
        while (std::abs(a - b) < 0.1) b = 0.2 + 2.8 * unit(rng);
        const std::string pair = "(a=" + fmt(a) + ", b=" + fmt(b) + ")";
        Generator g = two_state_real(a, b);
        const double gap = poincare_exact(g).value;
        c.check(std::abs(gap - (a + b)) <= 1e-10,
                pair + ": spectral gap " + fmt(gap) + " != a+b = " + fmt(a + b));
        const double rho = two_state_constants(a, b).rho;
        const double est = sobolev_estimate(g, SobolevKind::Lsi).value;
        c.check(std::abs(est - rho) <= 1e-3,
                pair + ": lsi estimate " + fmt(est) + " != closed form " + fmt(rho));
    }
    return c.finish("25 random rate pairs match both closed forms");
}

CriterionResult witness_hierarchy(const std::vector<CorpusEntry>& corp) {
    Checker c(2, "hierarchy at the returned witness");
    for (const auto& e : corp) {
        try {
            Generator g = build_mcmc(e.measure);
            ConstantEstimate lsi = sobolev_estimate(g, SobolevKind::Lsi);
            const Observable& f = lsi.witness;
            const double rl = ratio_lsi(g, f);
            const double rm = ratio_mlsi(g, f);
            const double rp = ratio_poincare(g, f);
            c.check(4 * rl <= rm + 1e-9, e.name + ": 4*lsi ratio " + fmt(4 * rl) +
                                             " > mlsi ratio " + fmt(rm));
            c.check(rm <= 2 * rp + 1e-9, e.name + ": mlsi ratio " + fmt(rm) +
                                             " > 2*poincare ratio " + fmt(2 * rp));
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    return c.finish("both witness inequalities hold on every corpus chain");
}

CriterionResult covering_verdicts(const std::vector<CorpusEntry>& corp) {
    Checker c(3, "covering-property verdicts");
    for (const auto& e : corp) {
        try {
            SCPReport r = check_scp(e.measure);
            std::string why = e.name + ": covering property rejected";
            if (r.witness)
                why += " (x=" + r.witness->x + ", y=" + r.witness->y + ": " +
                       r.witness->obstruction + ")";
            c.check(r.holds, why);
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    // positively correlated pair: pi(00) = pi(11) = 2/5, pi(01) = pi(10) = 1/10
    try {
        BooleanMeasure bad = make_explicit_exact(
            2, {{BitVector::from_string("00"), Rational(2, 5)},
                {BitVector::from_string("01"), Rational(1, 10)},
                {BitVector::from_string("10"), Rational(1, 10)},
                {BitVector::from_string("11"), Rational(2, 5)}});
        SCPReport r = check_scp(bad);
        c.check(!r.holds, "positively correlated pair accepted");
        c.check(r.witness.has_value(), "rejection carries no witness");
        if (r.witness) {
            const bool expected = r.witness->S == std::vector<int>{1} &&
                                  r.witness->x == "1" && r.witness->y == "0";
            c.check(expected, "witness is (S={" +
                                  (r.witness->S.empty()
                                       ? std::string("?")
                                       : std::to_string(r.witness->S[0])) +
                                  "}, x=" + r.witness->x + ", y=" + r.witness->y +
                                  "), expected (S={1}, x=1, y=0)");
        }
    } catch (const std::exception& ex) {
        c.check(false, std::string("counterexample: ") + ex.what());
    }
    return c.finish("accepted on the whole corpus, rejected with the expected witness");
}

CriterionResult rate_extreme_bounds(const std::vector<CorpusEntry>& corp) {
    Checker c(4, "rate-extreme lower bounds");
    for (const auto& e : corp) {
        try {
            Generator g = build_mcmc(e.measure);
            ChainStats st = validate(g);
            const double gap = poincare_exact(g).value;
            const double gap_floor = std::max(st.M, 2 * st.m);
            c.check(gap >= gap_floor - 1e-10, e.name + ": spectral gap " + fmt(gap) +
                                                  " < max{M, 2m} = " + fmt(gap_floor));
            const double mlsi = sobolev_estimate(g, SobolevKind::Mlsi).value;
            const double mlsi_floor = std::max(st.M, 4 * st.m);
            c.check(mlsi >= mlsi_floor - 1e-6, e.name + ": mlsi estimate " + fmt(mlsi) +
                                                   " < max{M, 4m} = " + fmt(mlsi_floor));
            const double lsi = sobolev_estimate(g, SobolevKind::Lsi).value;
            c.check(lsi >= st.m - 1e-6,
                    e.name + ": lsi estimate " + fmt(lsi) + " < m = " + fmt(st.m));
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    return c.finish("every estimate sits above its certified floor");
}

CriterionResult homogeneous_certificates(const std::vector<CorpusEntry>& corp) {
    Checker c(5, "homogeneous certificate and mixing bounds");
    for (const auto& e : corp) {
        const BooleanMeasure& m = e.measure;
        if (!m.homogeneity() || m.size() < 2) continue;
        const int k = *m.homogeneity();
        const int n = m.dim();
        try {
            Generator g = build_mcmc(m);
            Certificate cert = certify_main(g, Target::Alpha);
            c.check(cert.valid, e.name + ": certificate did not validate");
            c.check(cert.exact && cert.direct_bound_exact.has_value(),
                    e.name + ": certificate is not exact");
            if (cert.direct_bound_exact) {
                const Rational want(1, 2 * k * n);
                c.check(*cert.direct_bound_exact == want,
                        e.name + ": direct bound " + format_rational(*cert.direct_bound_exact) +
                            " != " + format_rational(want));
            }
            const double alpha = 1.0 / (2.0 * k * n);
            for (int i = 0; i < m.size(); ++i) {
                if (m.weight(i) >= std::exp(-1.0)) continue;
                for (double eps : {0.25, 0.125}) {
                    const double t = mixing_time(g, i, eps);
                    const BoundReport b = mixing_bound(BoundKind::Mlsi, alpha, m.weight(i), eps);
                    c.check(t <= b.value + 1e-9,
                            e.name + " from " + m.state(i).to_string() + ", eps=" + fmt(eps) +
                                ": mixing time " + fmt(t) + " > bound " + fmt(b.value));
                }
            }
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    return c.finish("all homogeneous walks certify 1/(2kn) and mix within the bound");
}

CriterionResult synthesized_walks(const std::vector<CorpusEntry>& corp) {
    Checker c(6, "synthesized walk validity");
    for (const auto& e : corp) {
        const BooleanMeasure& m = e.measure;
        try {
            SynthesisResult s = synthesize_flip_swap(m);
            ChainStats st = validate(s.averaged);
            c.check(st.flip_swap, e.name + ": a positive rate is neither flip nor swap");
            if (m.is_exact() && s.homogeneous) {
                const Rational cap(2 * *m.homogeneity());
                c.check(st.delta_exact && *st.delta_exact <= cap,
                        e.name + ": exact max exit rate " +
                            (st.delta_exact ? format_rational(*st.delta_exact)
                                            : std::string("?")) +
                            " > " + format_rational(cap));
            } else {
                c.check(st.delta <= s.delta_bound + 1e-9,
                        e.name + ": max exit rate " + fmt(st.delta) + " > " +
                            fmt(s.delta_bound));
            }
            c.check(s.normalized.has_value(), e.name + ": no normalized walk");
            if (s.normalized) {
                const double gap = poincare_exact(*s.normalized).value;
                const double floor = s.homogeneous ? 1.0 / (2.0 * *m.homogeneity())
                                                   : 1.0 / m.dim();
                c.check(gap >= floor - 1e-9, e.name + ": normalized spectral gap " +
                                                 fmt(gap) + " < " + fmt(floor));
            }
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    return c.finish("every synthesized walk is valid, bounded and fast");
}

CriterionResult decomposition_identities(const std::vector<CorpusEntry>& corp,
                                         std::uint64_t seed) {
    Checker c(7, "decomposition identities");
    int idx = 0;
    for (const auto& e : corp) {
        ++idx;
        try {
            Generator g = build_mcmc(e.measure);
            std::mt19937_64 rng(mix_seed(seed, 700 + static_cast<std::uint64_t>(idx)));
            for (int l = 1; l <= e.measure.dim(); ++l) {
                Decomposition d;
                try {
                    d = decompose_at(g, l);
                } catch (const DomainError&) {
                    continue; // constant coordinate: nothing to split
                }
                for (int t = 0; t < 100; ++t) {
                    Observable f(static_cast<size_t>(e.measure.size()));
                    for (auto& v : f) v = std::exp(sym(rng));
                    IdentityReport r = identity_check(d, f);
                    const std::string at = e.name + " l=" + std::to_string(l) +
                                           " trial " + std::to_string(t);
                    c.check(r.max_residual <= 1e-10,
                            at + ": identity residual " + fmt(r.max_residual));
                    const double jensen =
                        std::min({r.jensen_ff, r.jensen_flogf, r.jensen_sqrt});
                    c.check(jensen >= -1e-10, at + ": convexity gap " + fmt(jensen));
                }
            }
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    return c.finish("both identities and all convexity gaps hold at every split");
}

CriterionResult coupling_quality_bookkeeping(const std::vector<CorpusEntry>& corp) {
    Checker c(8, "coupling-quality bookkeeping");
    for (const auto& e : corp) {
        try {
            SynthesisResult s = synthesize_flip_swap(e.measure);
            c.check(!s.audits.empty(), e.name + ": no synthesis nodes audited");
            for (const auto& a : s.audits) {
                const std::string at = e.name + " " + a.path;
                c.check(std::abs(a.chi - a.pibar[0] / a.qbar10) <= 1e-10,
                        at + ": chi " + fmt(a.chi) + " != pibar0/qbar10 " +
                            fmt(a.pibar[0] / a.qbar10));
                c.check(std::abs(a.chi - a.pibar[1] / a.qbar01) <= 1e-10,
                        at + ": chi " + fmt(a.chi) + " != pibar1/qbar01 " +
                            fmt(a.pibar[1] / a.qbar01));
                c.check(a.crude_max <= a.chi + 1e-10,
                        at + ": crude floor " + fmt(a.crude_max) + " > chi " + fmt(a.chi));
            }
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    return c.finish("the coupling-quality identity holds at every synthesis node");
}

CriterionResult tail_bounds(const std::vector<CorpusEntry>& corp, std::uint64_t seed) {
    Checker c(9, "tail bounds");
    int idx = 0;
    for (const auto& e : corp) {
        ++idx;
        const BooleanMeasure& m = e.measure;
        try {
            Generator g = build_mcmc(m);
            Certificate cert = certify_main(g, Target::Alpha);
            if (!(cert.valid && cert.claimed_bound > 0)) {
                c.check(false, e.name + ": no usable certificate constant");
                continue;
            }
            std::mt19937_64 rng(mix_seed(seed, 900 + static_cast<std::uint64_t>(idx)));
            for (int t = 0; t < 20; ++t) {
                Observable f = random_lipschitz(m, rng);
                TailReport r = herbst_check(g, f, cert.claimed_bound);
                c.check(r.all_pass,
                        e.name + " trial " + std::to_string(t) + ": sub-gaussian bound violated");
            }
            if (m.homogeneity() && m.size() > 1) {
                for (int t = 0; t < 20; ++t) {
                    Observable f = random_lipschitz(m, rng);
                    TailReport r = pemantle_peres_check(m, f);
                    c.check(r.all_pass, e.name + " trial " + std::to_string(t) +
                                            ": homogeneous tail bound violated");
                }
            }
        } catch (const std::exception& ex) {
            c.check(false, e.name + ": " + ex.what());
        }
    }
    return c.finish("every tail bound dominates the enumerated tail");
}

CriterionResult semigroup_oracle() {
    Checker c(10, "semigroup oracle");
    try {
        Generator g = two_state_symmetric_exact();
        for (int j = 1; j <= 50; ++j) {
            const double t = 0.1 * j;
            const std::vector<double> p = evolve(g, 0, t);
            const double drift = 0.5 * std::exp(-2.0 * t);
            const double err =
                std::max(std::abs(p[0] - (0.5 + drift)), std::abs(p[1] - (0.5 - drift)));
            c.check(err <= 1e-10, "t=" + fmt(t) + ": semigroup error " + fmt(err));
        }
        for (double eps : {0.25, 0.125}) {
            const double tm = mixing_time(g, 0, eps);
            const double want = 0.5 * std::log(1.0 / (2.0 * eps));
            c.check(std::abs(tm - want) <= 1e-5, "eps=" + fmt(eps) + ": mixing time " +
                                                     fmt(tm) + " != " + fmt(want));
        }
    } catch (const std::exception& ex) {
        c.check(false, ex.what());
    }
    return c.finish("evolution and mixing time match the closed forms");
}

} // namespace

std::vector<CorpusEntry> corpus() {
    std::vector<CorpusEntry> out;
    const Rational half(1, 2);
    for (int n = 1; n <= 4; ++n)
        out.push_back({"uniform-cube-" + std::to_string(n),
                       make_product(std::vector<Rational>(static_cast<size_t>(n), half))});

    const std::vector<Rational> p{Rational(3, 10), Rational(3, 5), Rational(4, 5)};
    out.push_back({"product-0.3-0.6-0.8", make_product(p)});
    out.push_back({"product-slice-1", make_conditioned_sum(p, 1)});
    out.push_back({"product-slice-2", make_conditioned_sum(p, 2)});

    for (auto [n, k] : {std::pair<int, int>{4, 2}, {5, 2}, {6, 3}})
        out.push_back({"uniform-slice-" + std::to_string(n) + "-" + std::to_string(k),
                       make_conditioned_sum(
                           std::vector<Rational>(static_cast<size_t>(n), half), k)});

    out.push_back({"trees-triangle", make_spanning_tree(3, {{1, 2}, {2, 3}, {1, 3}})});
    out.push_back({"trees-square",
                   make_spanning_tree(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}})});
    out.push_back({"trees-k4", make_spanning_tree(
                                   4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}})});

    // Fixed determinantal kernel: L = A A^T + I/2 with A drawn once, seed 0.
    std::mt19937_64 rng(0);
    Matrix<double> a(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) a(i, j) = sym(rng);
    Matrix<double> L(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double dot = 0;
            for (int k = 0; k < 5; ++k) dot += a(i, k) * a(j, k);
            L(i, j) = dot + (i == j ? 0.5 : 0.0);
        }
    out.push_back({"dpp-5", make_l_ensemble(L)});
    return out;
}

SuiteResult run_suite(const std::vector<int>& ids, std::uint64_t seed) {
    std::vector<int> want = ids;
    if (want.empty()) want = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    for (int id : want)
        if (id < 1 || id > 10)
            throw InputError("criterion id " + std::to_string(id) + " outside 1..10");

    const std::vector<CorpusEntry> corp = corpus();
    SuiteResult out;
    out.all_pass = true;
    for (int id : want) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        switch (id) {
            case 1: r = two_state_forms(seed); break;
            case 2: r = witness_hierarchy(corp); break;
            case 3: r = covering_verdicts(corp); break;
            case 4: r = rate_extreme_bounds(corp); break;
            case 5: r = homogeneous_certificates(corp); break;
            case 6: r = synthesized_walks(corp); break;
            case 7: r = decomposition_identities(corp, seed); break;
            case 8: r = coupling_quality_bookkeeping(corp); break;
            case 9: r = tail_bounds(corp, seed); break;
            default: r = semigroup_oracle(); break;
        }
        const auto t1 = std::chrono::steady_clock::now();
        r.seconds = std::chrono::duration<double>(t1 - t0).count();
        out.all_pass = out.all_pass && r.pass;
        out.criteria.push_back(std::move(r));
    }
    return out;
}

Json suite_to_json(const SuiteResult& r) {
    Json doc;
    doc["all_pass"] = r.all_pass;
    Json list = Json::array();
    for (const auto& c : r.criteria) {
        Json e;
        e["id"] = c.id;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["checks"] = c.checks;
        e["details"] = c.details;
        list.push_back(std::move(e));
    }
    doc["criteria"] = std::move(list);
    return doc;
}

} // namespace coverwalk
