#pragma once

#include <string>
#include <vector>

#include "coverwalk/chain.hpp"
#include "coverwalk/functional.hpp"

namespace coverwalk {

/// Maximal one-sided quadratic variation: max over x of
/// sum_y Q(x,y) [f(y) - f(x)]_+^2.
double quad_variation(const Generator& g, const Observable& f);

/// Largest slope over support pairs: max |f(x) - f(y)| / hamming(x, y).
/// Throws DomainError on fewer than two support states.
double lipschitz_constant(const Observable& f, const BooleanMeasure& m);

struct TailPoint {
    double a = 0;
    double exact = 0;  // pi(f >= E f + a), enumerated
    double bound = 0;
    double margin = 0; // bound - exact
    bool pass = false;
};

/// Tail inequality evaluated on a grid of thresholds against exact
/// enumeration. kind is "herbst" (constants alpha_lb, v) or "pemantle-peres"
/// (constant k, possibly rescaled to unit Lipschitz constant). vacuous marks
/// a Herbst report with v(f) = 0, where the inequality carries no content.
struct TailReport {
    std::string kind;
    Observable f; // the observable the tails were taken of (post-rescale)
    std::vector<TailPoint> points;
    bool all_pass = false;
    bool vacuous = false;
    double alpha_lb = 0, v = 0; // herbst
    int k = 0;                  // pemantle-peres
    double lipschitz = 0;
    bool rescaled = false;
};

/// Sub-Gaussian tail bound exp(-alpha a^2 / (4 v(f))) from a certified lower
/// bound on the modified log-Sobolev constant, checked pointwise against the
/// enumerated tail. Empty grid: 16 evenly spaced thresholds up to the range
/// of f.
TailReport herbst_check(const Generator& g, const Observable& f, double alpha_lb,
                        std::vector<double> grid = {});

/// Homogeneous-measure tail bound exp(-a^2 / (8k)) checked against the
/// enumerated tail; f with Lipschitz constant above 1 is rescaled first and
/// the report flags it. Throws DomainError on non-homogeneous measures.
TailReport pemantle_peres_check(const BooleanMeasure& m, const Observable& f,
                                std::vector<double> grid = {});

} // namespace coverwalk
