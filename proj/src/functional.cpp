#include "coverwalk/functional.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "coverwalk/errors.hpp"

namespace coverwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(const Observable& f) {
    for (size_t i = 0; i < f.size(); ++i)
        if (!(f[i] > 0) || !std::isfinite(f[i]))
            throw DomainError("observable entry " + std::to_string(i) +
                              " is not strictly positive");
}

void require_aligned(const Generator& g, const Observable& f) {
    if (static_cast<int>(f.size()) != g.size())
        throw InputError("observable has " + std::to_string(f.size()) +
                         " entries for a support of size " + std::to_string(g.size()));
}

// symmetric conductance weights pi(x)Q(x,y); exact detailed balance makes the
// two directions agree, averaging just guards real-lane rounding
std::vector<std::vector<double>> conductances(const Generator& g) {
    const auto& pi = g.measure().weights();
    const int s = g.size();
    std::vector<std::vector<double>> w(static_cast<size_t>(s),
                                       std::vector<double>(static_cast<size_t>(s), 0.0));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (i != j)
                w[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    0.5 * (pi[static_cast<size_t>(i)] * g.rate(i, j) +
                           pi[static_cast<size_t>(j)] * g.rate(j, i));
    return w;
}

double mean(const std::vector<double>& pi, const Observable& f) {
    double m = 0;
    for (size_t i = 0; i < f.size(); ++i) m += pi[i] * f[i];
    return m;
}

double variance_of(const std::vector<double>& pi, const Observable& f) {
    const double m = mean(pi, f);
    double v = 0;
    for (size_t i = 0; i < f.size(); ++i) v += pi[i] * (f[i] - m) * (f[i] - m);
    return v;
}

double entropy_of(const std::vector<double>& pi, const Observable& f) {
    // E[f log(f/m)] with the zero-sum linear term folded in pointwise:
    // m * E[u log u - (u - 1)] over u = f/m. Every summand is non-negative,
    // so near-constant f (entropy ~ 1e-12) keeps full relative precision
    // where the textbook two-term difference loses half its digits.
    const double m = mean(pi, f);
    double e = 0;
    for (size_t i = 0; i < f.size(); ++i) {
        const double u = f[i] / m;
        e += pi[i] * (u * std::log(u) - (u - 1.0));
    }
    return m * e;
}

} // namespace

FormReport evaluate_forms(const Generator& g, const Observable& f) {
    require_aligned(g, f);
    require_positive(f);
    const auto& pi = g.measure().weights();
    const int s = g.size();

    Observable logf(f.size()), sqrtf(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        logf[i] = std::log(f[i]);
        sqrtf[i] = std::sqrt(f[i]);
    }

    auto dirichlet = [&](const Observable& a, const Observable& b) {
        double e = 0;
        for (int x = 0; x < s; ++x) {
            double qb = 0;
            for (int y = 0; y < s; ++y) qb += g.rate(x, y) * b[static_cast<size_t>(y)];
            e -= pi[static_cast<size_t>(x)] * a[static_cast<size_t>(x)] * qb;
        }
        return e;
    };

    FormReport r;
    r.dirichlet_ff = dirichlet(f, f);
    r.dirichlet_flogf = dirichlet(f, logf);
    r.dirichlet_sqrt = dirichlet(sqrtf, sqrtf);
    r.variance = variance_of(pi, f);
    r.entropy = entropy_of(pi, f);

    auto w = conductances(g);
    for (int x = 0; x < s; ++x)
        for (int y = x + 1; y < s; ++y) {
            const double c = w[static_cast<size_t>(x)][static_cast<size_t>(y)];
            if (c == 0) continue;
            const double df = f[static_cast<size_t>(x)] - f[static_cast<size_t>(y)];
            const double dl = logf[static_cast<size_t>(x)] - logf[static_cast<size_t>(y)];
            const double ds = sqrtf[static_cast<size_t>(x)] - sqrtf[static_cast<size_t>(y)];
            r.local_ff += c * df * df;
            r.local_flogf += c * df * dl;
            r.local_sqrt += c * ds * ds;
        }
    return r;
}

namespace {

double safe_ratio(double num, double den) { return den > 0 ? num / den : kInf; }

} // namespace

double ratio_poincare(const Generator& g, const Observable& f) {
    require_aligned(g, f);
    const auto& pi = g.measure().weights();
    auto w = conductances(g);
    double num = 0;
    for (int x = 0; x < g.size(); ++x)
        for (int y = x + 1; y < g.size(); ++y) {
            const double df = f[static_cast<size_t>(x)] - f[static_cast<size_t>(y)];
            num += w[static_cast<size_t>(x)][static_cast<size_t>(y)] * df * df;
        }
    return safe_ratio(num, variance_of(pi, f));
}

double ratio_mlsi(const Generator& g, const Observable& f) {
    require_aligned(g, f);
    require_positive(f);
    const auto& pi = g.measure().weights();
    auto w = conductances(g);
    double num = 0;
    for (int x = 0; x < g.size(); ++x)
        for (int y = x + 1; y < g.size(); ++y) {
            const double fx = f[static_cast<size_t>(x)], fy = f[static_cast<size_t>(y)];
            num += w[static_cast<size_t>(x)][static_cast<size_t>(y)] * (fx - fy) *
                   (std::log(fx) - std::log(fy));
        }
    return safe_ratio(num, entropy_of(pi, f));
}

double ratio_lsi(const Generator& g, const Observable& f) {
    require_aligned(g, f);
    require_positive(f);
    const auto& pi = g.measure().weights();
    auto w = conductances(g);
    double num = 0;
    for (int x = 0; x < g.size(); ++x)
        for (int y = x + 1; y < g.size(); ++y) {
            const double d = std::sqrt(f[static_cast<size_t>(x)]) -
                             std::sqrt(f[static_cast<size_t>(y)]);
            num += w[static_cast<size_t>(x)][static_cast<size_t>(y)] * d * d;
        }
    return safe_ratio(num, entropy_of(pi, f));
}

// ---- spectral gap ------------------------------------------------------------

namespace {

struct Spectrum {
    double gap;
    Observable eigenfunction; // of the gap eigenvalue, in f-units
};

Spectrum spectral_gap(const Generator& g) {
    const int s = g.size();
    const auto& pi = g.measure().weights();
    Eigen::MatrixXd A(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            A(i, j) = -std::sqrt(pi[static_cast<size_t>(i)]) * g.rate(i, j) /
                      std::sqrt(pi[static_cast<size_t>(j)]);
    Eigen::MatrixXd S = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Spectrum out;
    out.gap = es.eigenvalues()(1);
    out.eigenfunction.resize(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i)
        out.eigenfunction[static_cast<size_t>(i)] =
            es.eigenvectors()(i, 1) / std::sqrt(pi[static_cast<size_t>(i)]);
    return out;
}

} // namespace

ConstantEstimate poincare_exact(const Generator& g) {
    if (g.size() < 2)
        throw DomainError("spectral gap needs at least two states");
    require_irreducible(g);
    auto spec = spectral_gap(g);
    ConstantEstimate est;
    est.kind = "poincare";
    est.value = spec.gap;
    est.exact = true;
    est.witness = std::move(spec.eigenfunction);
    const double lo = *std::min_element(est.witness.begin(), est.witness.end());
    for (auto& v : est.witness) v += 1.0 - lo; // positive, ratio unchanged
    return est;
}

// ---- Sobolev constant search ---------------------------------------------------

namespace {

struct SearchProblem {
    std::vector<double> pi;
    std::vector<std::vector<double>> w; // conductances
    SobolevKind kind;
    double entropy_tol;

    int dim() const { return static_cast<int>(pi.size()); }

    double numerator(const Observable& f) const {
        double num = 0;
        for (int x = 0; x < dim(); ++x)
            for (int y = x + 1; y < dim(); ++y) {
                const double c = w[static_cast<size_t>(x)][static_cast<size_t>(y)];
                if (c == 0) continue;
                const double fx = f[static_cast<size_t>(x)], fy = f[static_cast<size_t>(y)];
                if (kind == SobolevKind::Mlsi)
                    num += c * (fx - fy) * (std::log(fx) - std::log(fy));
                else {
                    const double d = std::sqrt(fx) - std::sqrt(fy);
                    num += c * d * d;
                }
            }
        return num;
    }

    // ratio and its gradient in g-space, f = exp(g)
    double value_grad(const std::vector<double>& g, std::vector<double>* grad,
                      double* entropy_out) const {
        const int s = dim();
        Observable f(static_cast<size_t>(s));
        for (int i = 0; i < s; ++i) f[static_cast<size_t>(i)] = std::exp(g[static_cast<size_t>(i)]);
        const double ent = entropy_of(pi, f);
        if (entropy_out) *entropy_out = ent;
        const double num = numerator(f);
        const double ratio = ent > 0 ? num / ent : kInf;
        if (!grad) return ratio;

        grad->assign(static_cast<size_t>(s), 0.0);
        if (!(ent > 0) || !std::isfinite(ratio)) return ratio;
        std::vector<double> dnum(static_cast<size_t>(s), 0.0);
        for (int x = 0; x < s; ++x)
            for (int y = 0; y < s; ++y) {
                if (x == y) continue;
                const double c = w[static_cast<size_t>(x)][static_cast<size_t>(y)];
                if (c == 0) continue;
                const double fx = f[static_cast<size_t>(x)], fy = f[static_cast<size_t>(y)];
                if (kind == SobolevKind::Mlsi)
                    dnum[static_cast<size_t>(x)] +=
                        c * ((std::log(fx) - std::log(fy)) + (fx - fy) / fx);
                else
                    dnum[static_cast<size_t>(x)] += c * (1.0 - std::sqrt(fy / fx));
            }
        const double m = mean(pi, f);
        for (int x = 0; x < s; ++x) {
            const double dent = pi[static_cast<size_t>(x)] *
                                (std::log(f[static_cast<size_t>(x)]) - std::log(m));
            (*grad)[static_cast<size_t>(x)] =
                f[static_cast<size_t>(x)] * (dnum[static_cast<size_t>(x)] - ratio * dent) / ent;
        }
        return ratio;
    }

    double value(const std::vector<double>& g, double* entropy_out = nullptr) const {
        return value_grad(g, nullptr, entropy_out);
    }
};

void center_clamp(std::vector<double>& g) {
    double m = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    for (auto& v : g) v = std::clamp(v - m, -40.0, 40.0);
}

struct BasinResult {
    bool valid = false;
    double ratio = kInf;
    std::vector<double> g;
    long iterations = 0;
};

BasinResult descend(const SearchProblem& p, std::vector<double> g, long max_iter) {
    BasinResult out;
    center_clamp(g);
    // grow a start that sits below the entropy floor until it becomes usable
    double ent = 0;
    double ratio = p.value(g, &ent);
    for (int tries = 0; tries < 60 && ent < p.entropy_tol; ++tries) {
        for (auto& v : g) v *= 10.0;
        center_clamp(g);
        ratio = p.value(g, &ent);
    }
    if (ent < p.entropy_tol) return out;

    std::vector<double> grad, cand;
    double step = 0.25;
    for (long it = 0; it < max_iter; ++it) {
        ++out.iterations;
        ratio = p.value_grad(g, &grad, &ent);
        double norm = 0;
        for (double d : grad) norm += d * d;
        norm = std::sqrt(norm);
        if (!(norm > 1e-14)) break;
        cand = g;
        for (size_t i = 0; i < g.size(); ++i) cand[i] -= step * grad[i] / norm;
        center_clamp(cand);
        double cand_ent = 0;
        const double cand_ratio = p.value(cand, &cand_ent);
        if (cand_ent >= p.entropy_tol && cand_ratio < ratio) {
            g = cand;
            ratio = cand_ratio;
            step = std::min(step * 1.3, 2.0);
        } else {
            step *= 0.5;
            if (step < 1e-12) break;
        }
    }
    out.valid = true;
    out.ratio = p.value(g, &ent);
    out.g = std::move(g);
    return out;
}

// damped Newton on the analytic gradient, Hessian by central differences;
// used to push an interior optimum from 1e-8 accuracy down to near machine
void polish(const SearchProblem& p, BasinResult& best) {
    const int s = p.dim();
    double ent = 0;
    p.value(best.g, &ent);
    if (!(ent > 1e-6)) return; // boundary basin: the floor is the stop, not a stationary point

    std::vector<double> grad, gp, gm, cand;
    Eigen::MatrixXd H(s, s);
    Eigen::VectorXd rhs(s);
    const double h = 1e-5;
    for (int iter = 0; iter < 60; ++iter) {
        ++best.iterations;
        const double ratio = p.value_grad(best.g, &grad, &ent);
        double gnorm = 0;
        for (double d : grad) gnorm = std::max(gnorm, std::abs(d));
        if (gnorm < 1e-16) break;
        for (int k = 0; k < s; ++k) {
            auto gk = best.g;
            gk[static_cast<size_t>(k)] += h;
            p.value_grad(gk, &gp, nullptr);
            gk[static_cast<size_t>(k)] -= 2 * h;
            p.value_grad(gk, &gm, nullptr);
            for (int r = 0; r < s; ++r)
                H(r, k) = (gp[static_cast<size_t>(r)] - gm[static_cast<size_t>(r)]) / (2 * h);
        }
        Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
        for (int r = 0; r < s; ++r) rhs(r) = -grad[static_cast<size_t>(r)];
        double tau = 1e-10 * std::max(1.0, Hs.cwiseAbs().maxCoeff());
        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt, tau *= 10) {
            Eigen::MatrixXd Hd = Hs + tau * Eigen::MatrixXd::Identity(s, s);
            Eigen::VectorXd d = Hd.ldlt().solve(rhs);
            if (!d.allFinite()) continue;
            cand = best.g;
            for (int r = 0; r < s; ++r) cand[static_cast<size_t>(r)] += d(r);
            center_clamp(cand);
            double cand_ent = 0;
            const double cand_ratio = p.value(cand, &cand_ent);
            // Near the optimum the true improvement per step drops below the
            // rounding noise of the ratio itself, so progress is judged by
            // gradient contraction with an ulp-level slack on the ratio.
            const double slack = 4e-16 * std::max(1.0, std::abs(ratio));
            if (cand_ent >= p.entropy_tol && cand_ratio <= ratio + slack) {
                p.value_grad(cand, &gp, nullptr);
                double cand_norm = 0;
                for (double d2 : gp) cand_norm = std::max(cand_norm, std::abs(d2));
                if (cand_ratio < ratio - slack || cand_norm < 0.5 * gnorm) {
                    best.g = cand;
                    accepted = true;
                } else if (cand_ratio <= ratio) {
                    best.g = cand;
                    return; // tie with a stalled gradient: converged
                }
            }
        }
        if (!accepted) break;
    }
    best.ratio = p.value(best.g, &ent);
}

} // namespace

ConstantEstimate sobolev_estimate(const Generator& g, SobolevKind kind,
                                  const EstimateOptions& opts) {
    if (g.size() < 2)
        throw DomainError("constant estimation needs at least two states");
    require_irreducible(g);

    SearchProblem p;
    p.pi = g.measure().weights();
    p.w = conductances(g);
    p.kind = kind;
    p.entropy_tol = opts.entropy_tol;
    const int s = p.dim();

    auto spec = spectral_gap(g); // informed start along the slowest mode
    double vmax = 0;
    for (double v : spec.eigenfunction) vmax = std::max(vmax, std::abs(v));

    BasinResult best;
    long total_iter = 0;
    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        std::vector<double> g0(static_cast<size_t>(s), 0.0);
        if (r == 0) {
            for (int i = 0; i < s; ++i)
                g0[static_cast<size_t>(i)] =
                    1e-3 * spec.eigenfunction[static_cast<size_t>(i)] / vmax;
        } else if (r == 1) {
            // mass concentrated away from the lightest state
            int argmin = 0;
            for (int i = 1; i < s; ++i)
                if (p.pi[static_cast<size_t>(i)] < p.pi[static_cast<size_t>(argmin)]) argmin = i;
            for (int i = 0; i < s; ++i)
                g0[static_cast<size_t>(i)] = (i == argmin) ? 0.0 : std::log(1e-9);
        } else {
            std::mt19937_64 rng(opts.seed ^
                                (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(r + 1)));
            auto uniform01 = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
            for (int i = 0; i < s; ++i) g0[static_cast<size_t>(i)] = 2.0 * uniform01() - 1.0;
        }
        auto res = descend(p, std::move(g0), opts.max_iter);
        total_iter += res.iterations;
        if (res.valid && res.ratio < best.ratio) best = std::move(res);
    }
    if (!best.valid)
        throw EstimationError("every restart degenerated: entropy stayed below " +
                              std::to_string(opts.entropy_tol));
    if (opts.polish) {
        polish(p, best);
        total_iter = best.iterations > total_iter ? best.iterations : total_iter;
    }

    ConstantEstimate est;
    est.kind = kind == SobolevKind::Mlsi ? "mlsi" : "lsi";
    est.exact = false;
    est.restarts = std::max(1, opts.restarts);
    est.iterations = total_iter;
    est.seed = opts.seed;
    est.witness.resize(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i)
        est.witness[static_cast<size_t>(i)] = std::exp(best.g[static_cast<size_t>(i)]);
    const double m = mean(p.pi, est.witness);
    for (auto& v : est.witness) v /= m;
    auto ratio_at = [&](const Observable& f) {
        return kind == SobolevKind::Mlsi ? ratio_mlsi(g, f) : ratio_lsi(g, f);
    };
    est.value = ratio_at(est.witness);
    // When the infimum sits at the constant limit, the descent basin is flat
    // and the iterate can stall at a deviation whose O(eps^2) excess is still
    // visible. Contract toward the mean while that only improves the ratio;
    // a genuinely interior minimizer rejects the first halving.
    for (int step = 0; step < 60; ++step) {
        Observable cand(est.witness.size());
        for (size_t i = 0; i < cand.size(); ++i)
            cand[i] = 1.0 + 0.5 * (est.witness[i] - 1.0);
        const double cand_ratio = ratio_at(cand);
        if (!(cand_ratio <= est.value) ||
            entropy_of(p.pi, cand) < opts.entropy_tol)
            break;
        est.witness = std::move(cand);
        est.value = cand_ratio;
    }
    return est;
}

// ---- closed forms ------------------------------------------------------------

TwoStateConstants two_state_constants(double a, double b) {
    if (a < 0 || b < 0) throw InputError("two-state rates must be non-negative");
    if (a == 0 && b == 0) throw InputError("two-state rates cannot both be zero");
    TwoStateConstants c;
    c.lambda = a + b;
    c.alpha_lower = a + b;
    c.alpha_upper = 2 * (a + b);
    c.rho_floor = std::min(a, b);
    if (a == 0 || b == 0) {
        c.rho = 0;
        c.degenerate = true;
    } else if (a == b) {
        c.rho = a;
    } else {
        c.rho = (a - b) / (std::log(a) - std::log(b));
    }
    return c;
}

double rho_ceiling(const BooleanMeasure& m) {
    if (m.size() < 2)
        throw DomainError("the ceiling needs at least two support states");
    double best = kInf;
    for (int i = 0; i < m.size(); ++i)
        best = std::min(best, 1.0 / std::log(1.0 / m.weight(i)));
    return best;
}

} // namespace coverwalk
