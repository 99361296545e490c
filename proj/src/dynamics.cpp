#include "coverwalk/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "coverwalk/errors.hpp"
#include "coverwalk/functional.hpp"

namespace coverwalk {

namespace {

// one uniformization sweep: mu <- mu e^{tQ} with the Poisson tail below tail_tol
std::vector<double> evolve_step(const Matrix<double>& P, std::vector<double> mu, double mean,
                                double tail_tol) {
    const int s = P.rows();
    std::vector<double> out(static_cast<size_t>(s), 0.0);
    double pmf = std::exp(-mean); // k = 0
    double cum = pmf;
    for (int i = 0; i < s; ++i) out[static_cast<size_t>(i)] = pmf * mu[static_cast<size_t>(i)];
    std::vector<double> next(static_cast<size_t>(s));
    for (long k = 1; cum < 1.0 - tail_tol; ++k) {
        for (int j = 0; j < s; ++j) {
            double acc = 0;
            for (int i = 0; i < s; ++i) acc += mu[static_cast<size_t>(i)] * P(i, j);
            next[static_cast<size_t>(j)] = acc;
        }
        mu.swap(next);
        pmf *= mean / static_cast<double>(k);
        cum += pmf;
        for (int i = 0; i < s; ++i) out[static_cast<size_t>(i)] += pmf * mu[static_cast<size_t>(i)];
    }
    return out;
}

} // namespace

std::vector<double> evolve(const Generator& g, int start, double t) {
    const int s = g.size();
    if (start < 0 || start >= s)
        throw InputError("start index " + std::to_string(start) + " outside the support");
    if (t < 0) throw InputError("negative time");
    if (!std::isfinite(t)) throw InputError("time must be finite");

    std::vector<double> mu(static_cast<size_t>(s), 0.0);
    mu[static_cast<size_t>(start)] = 1.0;

    double delta = 0;
    for (int i = 0; i < s; ++i) delta = std::max(delta, -g.rate(i, i));
    if (delta == 0 || t == 0) return mu;

    Matrix<double> P(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            P(i, j) = (i == j ? 1.0 : 0.0) + g.rate(i, j) / delta;

    // split large horizons so the Poisson weights stay in double range
    const double chunk_mean = 200.0;
    long chunks = static_cast<long>(std::ceil(delta * t / chunk_mean));
    chunks = std::max(chunks, 1L);
    const double dt = t / static_cast<double>(chunks);
    const double tail_tol = 1e-12 / static_cast<double>(chunks);
    for (long c = 0; c < chunks; ++c) mu = evolve_step(P, std::move(mu), delta * dt, tail_tol);
    return mu;
}

std::vector<double> evolve(const Generator& g, const BitVector& start, double t) {
    const int idx = g.measure().index_of(start);
    if (idx < 0)
        throw InputError("state " + start.to_string() + " is not in the support");
    return evolve(g, idx, t);
}

double tv(const std::vector<double>& mu, const std::vector<double>& nu) {
    if (mu.size() != nu.size())
        throw InputError("laws live on different index sets (" + std::to_string(mu.size()) +
                         " vs " + std::to_string(nu.size()) + ")");
    double l1 = 0;
    for (size_t i = 0; i < mu.size(); ++i) l1 += std::abs(mu[i] - nu[i]);
    return 0.5 * l1;
}

double mixing_time(const Generator& g, int start, double epsilon) {
    if (!(epsilon > 0) || !(epsilon < 1))
        throw InputError("epsilon must lie in (0, 1)");
    if (start < 0 || start >= g.size())
        throw InputError("start index " + std::to_string(start) + " outside the support");
    require_irreducible(g);

    const auto& pi = g.measure().weights();
    auto dist_at = [&](double t) { return tv(evolve(g, start, t), pi); };

    if (dist_at(0.0) <= epsilon) return 0.0;

    double hi = 1.0;
    int tries = 0;
    while (dist_at(hi) > epsilon) {
        hi *= 2;
        if (++tries > 200)
            throw EstimationError("no mixing below t = " + std::to_string(hi) +
                                  "; the chain does not appear to converge");
    }
    double lo = hi > 1.0 ? hi / 2 : 0.0;
    while (hi - lo > 2e-6) {
        const double mid = 0.5 * (lo + hi);
        (dist_at(mid) <= epsilon ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

BoundReport mixing_bound(BoundKind kind, double constant, double pi_x, double epsilon) {
    if (!(constant > 0)) throw InputError("the functional constant must be positive");
    if (!(pi_x > 0) || !(pi_x < 1)) throw InputError("pi(x) must lie in (0, 1)");
    if (!(epsilon > 0) || !(epsilon < 1)) throw InputError("epsilon must lie in (0, 1)");

    BoundReport r;
    if (kind == BoundKind::Pi) {
        r.value = (std::log(1.0 / pi_x) + std::log(1.0 / (4 * epsilon * epsilon))) /
                  (2 * constant);
        return r;
    }
    double loglog = std::log(std::log(1.0 / pi_x));
    if (!(loglog > 0)) { // pi_x in [1/e, 1): the inner log is at most 1
        loglog = 0;
        r.floored = true;
    }
    r.value = (loglog + std::log(1.0 / (2 * epsilon * epsilon))) / constant;
    return r;
}

MixingReport mixing_report(const Generator& g, int start, double epsilon) {
    MixingReport rep;
    if (start < 0 || start >= g.size())
        throw InputError("start index " + std::to_string(start) + " outside the support");
    rep.start_state = g.measure().state(start).to_string();
    rep.epsilon = epsilon;
    rep.pi_x = g.measure().weight(start);
    rep.t_mix = mixing_time(g, start, epsilon);

    try {
        const auto gap = poincare_exact(g);
        const auto bound = mixing_bound(BoundKind::Pi, gap.value, rep.pi_x, epsilon);
        BoundLine line{"pi", "exact", gap.value, bound.value, bound.floored, false};
        line.violated = rep.t_mix > bound.value + 1e-9;
        rep.bounds.push_back(line);
    } catch (const Error& e) {
        rep.notes.push_back(std::string("no spectral-gap bound: ") + e.what());
    }

    try {
        const auto cert = certify_main(g, Target::Alpha);
        if (cert.valid && !cert.vacuous) {
            const auto bound =
                mixing_bound(BoundKind::Mlsi, cert.claimed_bound, rep.pi_x, epsilon);
            BoundLine line{"mlsi", "certificate", cert.claimed_bound, bound.value,
                           bound.floored, false};
            line.violated = rep.t_mix > bound.value + 1e-9;
            rep.bounds.push_back(line);
        } else {
            rep.notes.push_back(cert.valid ? "certificate bound is vacuous"
                                           : "certificate did not validate");
        }
    } catch (const Error& e) {
        rep.notes.push_back(std::string("no certificate bound: ") + e.what());
    }

    for (const auto& line : rep.bounds) rep.violation = rep.violation || line.violated;
    return rep;
}

} // namespace coverwalk
