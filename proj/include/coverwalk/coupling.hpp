#pragma once

#include <vector>

#include "coverwalk/bitvector.hpp"
#include "coverwalk/matrix.hpp"
#include "coverwalk/rational.hpp"

namespace coverwalk {

/// Which admissible-pair relation a coupling's support obeys.
enum class Relation { Cover, FlipSwap };

/// Joint distribution over left_support x right_support whose positive
/// entries all satisfy the declared relation and whose marginals are the two
/// coupled laws. Carries exact masses when produced on the exact lane.
class Coupling {
public:
    Coupling() = default;
    static Coupling exact(std::vector<BitVector> left, std::vector<BitVector> right,
                          Matrix<Rational> mass, Relation rel);
    static Coupling real(std::vector<BitVector> left, std::vector<BitVector> right,
                         Matrix<double> mass, Relation rel);

    bool is_exact() const { return exact_; }
    Relation relation() const { return rel_; }
    const std::vector<BitVector>& left_support() const { return left_; }
    const std::vector<BitVector>& right_support() const { return right_; }

    double mass(int i, int j) const { return mass_d_(i, j); }
    const Matrix<double>& mass_matrix() const { return mass_d_; }
    const Matrix<Rational>& exact_mass_matrix() const;

    /// Transposed coupling (right marginal first).
    Coupling transposed() const;

    std::vector<double> left_marginal() const;
    std::vector<double> right_marginal() const;

private:
    std::vector<BitVector> left_, right_;
    bool exact_ = false;
    Matrix<Rational> mass_q_;
    Matrix<double> mass_d_;
    Relation rel_ = Relation::Cover;
};

} // namespace coverwalk
