#include "coverwalk/coupling.hpp"

#include "coverwalk/errors.hpp"

namespace coverwalk {

namespace {

void check_shape(const std::vector<BitVector>& left, const std::vector<BitVector>& right,
                 int rows, int cols) {
    if (rows != static_cast<int>(left.size()) || cols != static_cast<int>(right.size()))
        throw InputError("coupling mass matrix shape does not match the supports");
}

// Every positively-weighted pair must satisfy the declared relation; this is
// the class invariant every consumer (chi, identity checks, reports) leans on.
void check_relation(const std::vector<BitVector>& left, const std::vector<BitVector>& right,
                    const Matrix<double>& mass, Relation rel) {
    for (int i = 0; i < mass.rows(); ++i)
        for (int j = 0; j < mass.cols(); ++j) {
            const double w = mass(i, j);
            if (w == 0) continue;
            if (w < 0)
                throw ValidationError("negative coupling mass at (" +
                                      left[static_cast<size_t>(i)].to_string() + ", " +
                                      right[static_cast<size_t>(j)].to_string() + ")");
            const BitVector& x = left[static_cast<size_t>(i)];
            const BitVector& y = right[static_cast<size_t>(j)];
            const bool ok = rel == Relation::Cover ? covers(x, y) : flip_or_swap(x, y);
            if (!ok)
                throw ValidationError("coupling places mass " + std::to_string(w) + " on (" +
                                      x.to_string() + ", " + y.to_string() +
                                      "), which violates the declared relation");
        }
}

} // namespace

Coupling Coupling::exact(std::vector<BitVector> left, std::vector<BitVector> right,
                         Matrix<Rational> mass, Relation rel) {
    check_shape(left, right, mass.rows(), mass.cols());
    Coupling c;
    c.left_ = std::move(left);
    c.right_ = std::move(right);
    c.exact_ = true;
    c.mass_d_ = Matrix<double>(mass.rows(), mass.cols());
    for (int i = 0; i < mass.rows(); ++i)
        for (int j = 0; j < mass.cols(); ++j) c.mass_d_(i, j) = to_double(mass(i, j));
    c.mass_q_ = std::move(mass);
    c.rel_ = rel;
    check_relation(c.left_, c.right_, c.mass_d_, rel);
    return c;
}

Coupling Coupling::real(std::vector<BitVector> left, std::vector<BitVector> right,
                        Matrix<double> mass, Relation rel) {
    check_shape(left, right, mass.rows(), mass.cols());
    Coupling c;
    c.left_ = std::move(left);
    c.right_ = std::move(right);
    c.exact_ = false;
    c.mass_d_ = std::move(mass);
    c.rel_ = rel;
    check_relation(c.left_, c.right_, c.mass_d_, rel);
    return c;
}

const Matrix<Rational>& Coupling::exact_mass_matrix() const {
    if (!exact_) throw DomainError("coupling carries real masses; exact view unavailable");
    return mass_q_;
}

Coupling Coupling::transposed() const {
    Coupling c;
    c.left_ = right_;
    c.right_ = left_;
    c.exact_ = exact_;
    c.rel_ = rel_;
    c.mass_d_ = Matrix<double>(mass_d_.cols(), mass_d_.rows());
    for (int i = 0; i < mass_d_.rows(); ++i)
        for (int j = 0; j < mass_d_.cols(); ++j) c.mass_d_(j, i) = mass_d_(i, j);
    if (exact_) {
        c.mass_q_ = Matrix<Rational>(mass_q_.cols(), mass_q_.rows());
        for (int i = 0; i < mass_q_.rows(); ++i)
            for (int j = 0; j < mass_q_.cols(); ++j) c.mass_q_(j, i) = mass_q_(i, j);
    }
    return c;
}

std::vector<double> Coupling::left_marginal() const {
    std::vector<double> out(left_.size(), 0.0);
    for (int i = 0; i < mass_d_.rows(); ++i)
        for (int j = 0; j < mass_d_.cols(); ++j) out[static_cast<size_t>(i)] += mass_d_(i, j);
    return out;
}

std::vector<double> Coupling::right_marginal() const {
    std::vector<double> out(right_.size(), 0.0);
    for (int i = 0; i < mass_d_.rows(); ++i)
        for (int j = 0; j < mass_d_.cols(); ++j) out[static_cast<size_t>(j)] += mass_d_(i, j);
    return out;
}

} // namespace coverwalk
