#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coverwalk/bitvector.hpp"
#include "coverwalk/matrix.hpp"
#include "coverwalk/rational.hpp"

namespace coverwalk {

/// Probability measure on {0,1}^n given by an explicit support.
///
/// Weights live in one of two lanes: exact rationals (constructors with
/// rational inputs) or doubles (determinant-based constructions). Support is
/// kept sorted ascending by mask so every downstream matrix, report and JSON
/// document is deterministic. A double view of the weights is always
/// materialized for numeric consumers.
class BooleanMeasure {
public:
    BooleanMeasure() = default;

    /// Both factories sort by state, reject duplicates and non-positive
    /// weights, and renormalize by the total mass (recording a note when the
    /// input was materially off 1).
    static BooleanMeasure exact(int n, std::vector<BitVector> support,
                                std::vector<Rational> weights,
                                std::vector<std::string> notes = {});
    static BooleanMeasure real(int n, std::vector<BitVector> support,
                               std::vector<double> weights,
                               std::vector<std::string> notes = {});

    bool is_exact() const { return std::holds_alternative<std::vector<Rational>>(lane_); }
    int dim() const { return n_; }
    int size() const { return static_cast<int>(support_.size()); }

    const std::vector<BitVector>& support() const { return support_; }
    const BitVector& state(int i) const { return support_[static_cast<size_t>(i)]; }

    /// Double view, present in both lanes.
    const std::vector<double>& weights() const { return weights_real_; }
    double weight(int i) const { return weights_real_[static_cast<size_t>(i)]; }

    /// Exact weights; throws DomainError on the real lane.
    const std::vector<Rational>& exact_weights() const;
    const Rational& exact_weight(int i) const { return exact_weights()[static_cast<size_t>(i)]; }

    /// Index of a state in the support, or -1.
    int index_of(const BitVector& x) const;

    /// Common population count of the support, when one exists.
    std::optional<int> homogeneity() const { return homogeneity_; }

    /// Construction warnings (renormalization, dropped noise states, ...).
    const std::vector<std::string>& notes() const { return notes_; }

private:
    int n_ = 0;
    std::vector<BitVector> support_;
    std::variant<std::vector<Rational>, std::vector<double>> lane_;
    std::vector<double> weights_real_;
    std::optional<int> homogeneity_;
    std::vector<std::string> notes_;
};

/// Lane-generic weight access for templated kernels. T is Rational or double.
template <class T>
const std::vector<T>& weights_as(const BooleanMeasure& m);

template <>
inline const std::vector<Rational>& weights_as<Rational>(const BooleanMeasure& m) {
    return m.exact_weights();
}
template <>
inline const std::vector<double>& weights_as<double>(const BooleanMeasure& m) {
    return m.weights();
}

// ---- constructors ----------------------------------------------------------

BooleanMeasure make_explicit_exact(int n, const std::vector<std::pair<BitVector, Rational>>& table);
BooleanMeasure make_explicit_real(int n, const std::vector<std::pair<BitVector, double>>& table);

/// Independent coordinates with P(x_i = 1) = p_i, each p_i in (0,1). Exact.
BooleanMeasure make_product(const std::vector<Rational>& p);

/// Product law conditioned on the slice sum(x) = k, renormalized. Exact.
BooleanMeasure make_conditioned_sum(const std::vector<Rational>& p, int k);

/// Uniform law on edge-indicator vectors of spanning trees; coordinates are
/// the edges in input order, vertices are 1-based. Exact.
BooleanMeasure make_spanning_tree(int vertices, const std::vector<std::pair<int, int>>& edges);

/// Determinantal law pi(S) proportional to det(L_S), L symmetric PSD. Real
/// lane; states with weight below 1e-14 times the max are dropped with a note.
BooleanMeasure make_l_ensemble(const Matrix<double>& L);

// ---- operations ------------------------------------------------------------

struct ConditionResult {
    BooleanMeasure measure; // on the n - |assignment| remaining coordinates
    /// kept[j-1] = original index of new coordinate j (increasing order).
    std::vector<int> kept;
};

/// Conditional law given X_i = b for each (i, b) in the assignment.
/// Throws DomainError when the event has probability zero.
ConditionResult condition(const BooleanMeasure& m, const std::map<int, int>& assignment);

struct SplitResult {
    /// Projection law (mass of x_l = 0, mass of x_l = 1).
    std::array<double, 2> pibar;
    std::array<Rational, 2> pibar_exact; // valid on the exact lane
    bool exact = false;
    /// Conditional laws, still on all n coordinates.
    BooleanMeasure block0, block1;
};

/// Two-block split at coordinate l. Throws DomainError when a block is empty.
SplitResult split(const BooleanMeasure& m, int l);

} // namespace coverwalk
