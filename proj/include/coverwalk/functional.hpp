#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coverwalk/chain.hpp"

namespace coverwalk {

/// Real-valued function on a measure's support, aligned with support order.
using Observable = std::vector<double>;

/// The three energy forms, their local pair-sum twins, and the two deviation
/// functionals. Under reversibility each local form equals its matching
/// Dirichlet form; both are reported so the identity can be audited.
struct FormReport {
    double dirichlet_ff = 0;    // E(f, f)
    double dirichlet_flogf = 0; // E(f, log f)
    double dirichlet_sqrt = 0;  // E(sqrt f, sqrt f)
    double variance = 0;
    double entropy = 0;
    double local_ff = 0;
    double local_flogf = 0;
    double local_sqrt = 0;
};

/// Evaluate all forms at a positive observable. Throws DomainError when an
/// entry is non-positive (logs and square roots are taken).
FormReport evaluate_forms(const Generator& g, const Observable& f);

// Ratio helpers: energy over deviation at one observable. The constants are
// the infima of these ratios over positive non-constant f.
double ratio_poincare(const Generator& g, const Observable& f);
double ratio_mlsi(const Generator& g, const Observable& f);
double ratio_lsi(const Generator& g, const Observable& f);

/// Result of an exact computation or a ratio-minimizing search.
struct ConstantEstimate {
    std::string kind; // "poincare" | "mlsi" | "lsi"
    double value = 0;
    Observable witness; // positive, non-constant; ratio(witness) == value
    bool exact = false; // true only for the spectral Poincare value
    int restarts = 0;
    long iterations = 0;
    std::uint64_t seed = 0;
};

/// Spectral gap of the pi-symmetrized generator: exact up to dense
/// eigensolver accuracy. Throws ValidationError on a reducible generator,
/// listing its communicating classes.
ConstantEstimate poincare_exact(const Generator& g);

enum class SobolevKind { Mlsi, Lsi };

struct EstimateOptions {
    int restarts = 32;
    long max_iter = 5000;
    std::uint64_t seed = 0;
    double entropy_tol = 1e-12; // iterates below this entropy are rejected
    bool polish = true;         // Newton refinement of the best basin
};

/// Minimize E(f, log f)/Ent(f) or E(sqrt f, sqrt f)/Ent(f) over positive
/// non-constant f by gradient descent on log f with multi-start. The result
/// is an upper bound on the true constant. Deterministic given the seed, and
/// monotone in the number of restarts. Throws EstimationError when every
/// restart degenerates.
ConstantEstimate sobolev_estimate(const Generator& g, SobolevKind kind,
                                  const EstimateOptions& opts = {});

/// Closed forms for the two-state chain with rates (a, b).
struct TwoStateConstants {
    double lambda = 0;      // a + b
    double alpha_lower = 0; // a + b
    double alpha_upper = 0; // 2(a + b)
    double rho = 0;         // (a-b)/(log a - log b); a when a == b
    double rho_floor = 0;   // min(a, b)
    bool degenerate = false; // one rate is zero: the chain absorbs, rho = 0
};
TwoStateConstants two_state_constants(double a, double b);

/// min over support states of 1/log(1/pi(x)): an upper bound for the LSI
/// constant of any normalized generator. Throws DomainError on singletons.
double rho_ceiling(const BooleanMeasure& m);

} // namespace coverwalk
