#include "coverwalk/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "coverwalk/errors.hpp"

namespace coverwalk {

namespace {

void require_aligned(const BooleanMeasure& m, const Observable& f) {
    if (static_cast<int>(f.size()) != m.size())
        throw InputError("observable has " + std::to_string(f.size()) +
                         " entries for a support of size " + std::to_string(m.size()));
}

std::vector<double> default_grid(const Observable& f) {
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    const double range = *hi - *lo;
    if (range == 0) return {0.0};
    std::vector<double> grid;
    for (int j = 1; j <= 16; ++j) grid.push_back(range * j / 16.0);
    return grid;
}

double exact_tail(const BooleanMeasure& m, const Observable& f, double threshold) {
    double mass = 0;
    // a hair of slack so states sitting exactly on the threshold count
    for (int i = 0; i < m.size(); ++i)
        if (f[static_cast<size_t>(i)] >= threshold - 1e-12) mass += m.weight(i);
    return mass;
}

double mean_of(const BooleanMeasure& m, const Observable& f) {
    double s = 0;
    for (int i = 0; i < m.size(); ++i) s += m.weight(i) * f[static_cast<size_t>(i)];
    return s;
}

} // namespace

double quad_variation(const Generator& g, const Observable& f) {
    require_aligned(g.measure(), f);
    double worst = 0;
    for (int x = 0; x < g.size(); ++x) {
        double acc = 0;
        for (int y = 0; y < g.size(); ++y) {
            if (x == y) continue;
            const double rise = f[static_cast<size_t>(y)] - f[static_cast<size_t>(x)];
            if (rise > 0) acc += g.rate(x, y) * rise * rise;
        }
        worst = std::max(worst, acc);
    }
    return worst;
}

double lipschitz_constant(const Observable& f, const BooleanMeasure& m) {
    require_aligned(m, f);
    if (m.size() < 2)
        throw DomainError("a Lipschitz constant needs at least two support states");
    double worst = 0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) {
            const int d = hamming(m.state(i), m.state(j));
            worst = std::max(
                worst, std::abs(f[static_cast<size_t>(i)] - f[static_cast<size_t>(j)]) / d);
        }
    return worst;
}

TailReport herbst_check(const Generator& g, const Observable& f, double alpha_lb,
                        std::vector<double> grid) {
    require_aligned(g.measure(), f);
    if (!(alpha_lb > 0)) throw InputError("the certified constant must be positive");
    if (grid.empty()) grid = default_grid(f);

    TailReport rep;
    rep.kind = "herbst";
    rep.f = f;
    rep.alpha_lb = alpha_lb;
    rep.v = quad_variation(g, f);
    rep.vacuous = rep.v == 0;

    const double mean = mean_of(g.measure(), f);
    rep.all_pass = true;
    for (double a : grid) {
        if (a < 0) throw InputError("tail thresholds must be non-negative");
        TailPoint p;
        p.a = a;
        p.exact = exact_tail(g.measure(), f, mean + a);
        if (a == 0)
            p.bound = 1.0;
        else if (rep.v > 0)
            p.bound = std::exp(-alpha_lb * a * a / (4 * rep.v));
        else
            p.bound = 0.0; // vacuous: no variation to beat
        p.margin = p.bound - p.exact;
        p.pass = p.exact <= p.bound + 1e-12;
        rep.all_pass = rep.all_pass && p.pass;
        rep.points.push_back(p);
    }
    return rep;
}

TailReport pemantle_peres_check(const BooleanMeasure& m, const Observable& f,
                                std::vector<double> grid) {
    require_aligned(m, f);
    if (!m.homogeneity())
        throw DomainError("the homogeneous tail bound needs a homogeneous measure");

    TailReport rep;
    rep.kind = "pemantle-peres";
    rep.k = *m.homogeneity();
    rep.f = f;
    if (m.size() >= 2) {
        rep.lipschitz = lipschitz_constant(f, m);
        if (rep.lipschitz > 1 + 1e-12) {
            rep.rescaled = true;
            for (auto& v : rep.f) v /= rep.lipschitz;
        }
    }
    if (grid.empty()) grid = default_grid(rep.f);

    const double mean = mean_of(m, rep.f);
    rep.all_pass = true;
    for (double a : grid) {
        if (a < 0) throw InputError("tail thresholds must be non-negative");
        TailPoint p;
        p.a = a;
        p.exact = exact_tail(m, rep.f, mean + a);
        if (a == 0)
            p.bound = 1.0;
        else if (rep.k > 0)
            p.bound = std::exp(-a * a / (8.0 * rep.k));
        else
            p.bound = 0.0; // zero-homogeneous: the support is a single point
        p.margin = p.bound - p.exact;
        p.pass = p.exact <= p.bound + 1e-12;
        rep.all_pass = rep.all_pass && p.pass;
        rep.points.push_back(p);
    }
    return rep;
}

} // namespace coverwalk
