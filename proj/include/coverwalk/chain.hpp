#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coverwalk/matrix.hpp"
#include "coverwalk/measure.hpp"

namespace coverwalk {

/// Reversible Markov rate matrix indexed by a measure's support. Off-diagonal
/// entries are non-negative, rows sum to zero, and detailed balance holds
/// against the carried measure; validate() enforces all three. Exact-lane
/// generators keep rational rates alongside the double view.
class Generator {
public:
    Generator() = default;
    static Generator exact(BooleanMeasure m, Matrix<Rational> rates);
    static Generator real(BooleanMeasure m, Matrix<double> rates);

    const BooleanMeasure& measure() const { return measure_; }
    bool is_exact() const { return exact_; }
    int size() const { return rates_d_.rows(); }

    double rate(int i, int j) const { return rates_d_(i, j); }
    const Matrix<double>& rates() const { return rates_d_; }
    const Matrix<Rational>& exact_rates() const;

private:
    BooleanMeasure measure_;
    bool exact_ = false;
    Matrix<Rational> rates_q_;
    Matrix<double> rates_d_;
};

/// Lane-generic rate access for templated kernels.
template <class T>
const Matrix<T>& rates_as(const Generator& g);

template <>
inline const Matrix<Rational>& rates_as<Rational>(const Generator& g) {
    return g.exact_rates();
}
template <>
inline const Matrix<double>& rates_as<double>(const Generator& g) {
    return g.rates();
}

/// Summary statistics of a generator. m and M run over flip/swap pairs of
/// support states (including pairs the generator rates at zero); when no such
/// pair exists they are infinite and flagged vacuous.
struct ChainStats {
    double delta = 0;
    double m = 0;
    double M = 0;
    bool pairs_vacuous = false;
    bool flip_swap = false;  // every positive off-diagonal rate is a flip or swap
    bool normalized = false; // delta <= 1
    double reversibility_residual = 0;
    // exact mirrors, present on the exact lane
    std::optional<Rational> delta_exact, m_exact, M_exact;
};

/// Check the structural invariants (non-negative off-diagonals, zero row
/// sums, detailed balance) and compute the statistics. Throws ValidationError
/// naming the worst entry on violation. Tolerances: 1e-12 absolute on row
/// sums, 1e-12 relative on detailed balance; the exact lane must satisfy both
/// exactly.
ChainStats validate(const Generator& g);

/// Metropolis-type flip/swap walk: rate(x,y) = min{pi(y)/pi(x), 1} / (2kn)
/// for flip/swap support pairs, with k the homogeneity degree when defined
/// and n/2 otherwise.
Generator build_mcmc(const BooleanMeasure& m);

/// Uniform exchange walk: rate 1/(2kn) on every flip/swap support pair.
/// Requires a uniform, homogeneous measure.
Generator build_bases_exchange(const BooleanMeasure& m);

/// Q / Delta(Q). Throws DomainError on the zero generator.
Generator normalize(const Generator& g);

/// Communicating classes of the support under positive rates (either
/// direction), each ascending, ordered by smallest member. One class means
/// irreducible.
std::vector<std::vector<int>> communicating_classes(const Generator& g);

/// Throws ValidationError listing the classes when g is reducible.
void require_irreducible(const Generator& g);

/// Assemble a generator from sparse off-diagonal rates (diagonal rebuilt as
/// the negative row sum) and validate it. Entries are (from, to, rate) over
/// support indices.
struct RateEntry {
    int from;
    int to;
    double rate;
    std::optional<Rational> rate_exact;
};
Generator generator_from_rates(const BooleanMeasure& m, const std::vector<RateEntry>& entries);

} // namespace coverwalk
