#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coverwalk/chain.hpp"
#include "coverwalk/decompose.hpp"

namespace coverwalk {

/// Row x of e^{tQ}: the law at time t started from support state x, computed
/// by uniformization (a Poisson mixture of powers of I + Q/Delta) with the
/// neglected Poisson tail below 1e-12. Throws InputError for t < 0 or a start
/// outside the support.
std::vector<double> evolve(const Generator& g, int start, double t);
std::vector<double> evolve(const Generator& g, const BitVector& start, double t);

/// Total variation distance: half the L1 distance between two laws on the
/// same index set.
double tv(const std::vector<double>& mu, const std::vector<double>& nu);

/// min{t >= 0 : ||p_t(x,.) - pi||_TV <= epsilon}, located by doubling then
/// bisection (TV to stationarity is non-increasing in t). Result is within
/// 1e-6 of the true time. Requires epsilon in (0,1) and an irreducible chain.
double mixing_time(const Generator& g, int start, double epsilon);

enum class BoundKind { Pi, Mlsi };

/// A mixing-time bound value. floored marks an Mlsi bound whose log log term
/// was negative (pi_x in [1/e, 1)) and was clamped to zero, the regime where
/// the bound statement degenerates.
struct BoundReport {
    double value = 0;
    bool floored = false;
};

/// Evaluate the spectral-gap bound (1/2c)(log(1/pi_x) + log(1/(4 eps^2))) or
/// the modified log-Sobolev bound (1/c)(log log(1/pi_x) + log(1/(2 eps^2))).
/// constant must be a positive lower bound on lambda resp. alpha.
BoundReport mixing_bound(BoundKind kind, double constant, double pi_x, double epsilon);

/// One bound line of a mixing report: where the constant came from and what
/// the resulting time bound is.
struct BoundLine {
    std::string kind;       // "pi" | "mlsi"
    std::string provenance; // "exact" | "certificate"
    double constant = 0;
    double value = 0;
    bool floored = false;
    bool violated = false; // t_mix exceeds this certified bound
};

/// Measured mixing time of a chain against the bounds derived from its exact
/// spectral gap and its certified modified log-Sobolev constant. A bound that
/// could not be produced (vacuous certificate) is skipped with a note.
struct MixingReport {
    std::string start_state;
    double epsilon = 0;
    double pi_x = 0;
    double t_mix = 0;
    std::vector<BoundLine> bounds;
    std::vector<std::string> notes;
    bool violation = false; // some certified bound is exceeded
};

/// Compute t_mix and both bounds: the Poincare bound from the dense spectral
/// gap ("exact") and the Mlsi bound from the recursive certificate
/// ("certificate"). Requires the measure to satisfy the covering property for
/// the certificate line; on certificate failure the line is dropped with a
/// note.
MixingReport mixing_report(const Generator& g, int start, double epsilon);

} // namespace coverwalk
