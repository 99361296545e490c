#include "coverwalk/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "coverwalk/errors.hpp"

namespace coverwalk {

namespace {

void check_shape(const BooleanMeasure& m, int rows, int cols) {
    if (m.size() == 0) throw InputError("generator needs a non-empty support");
    if (rows != m.size() || cols != m.size())
        throw InputError("rate matrix is " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " but the support has " +
                         std::to_string(m.size()) + " states");
}

} // namespace

Generator Generator::exact(BooleanMeasure m, Matrix<Rational> rates) {
    check_shape(m, rates.rows(), rates.cols());
    if (!m.is_exact())
        throw InputError("exact generator requires an exact-lane measure");
    Generator g;
    g.measure_ = std::move(m);
    g.exact_ = true;
    g.rates_d_ = Matrix<double>(rates.rows(), rates.cols());
    for (int i = 0; i < rates.rows(); ++i)
        for (int j = 0; j < rates.cols(); ++j) g.rates_d_(i, j) = to_double(rates(i, j));
    g.rates_q_ = std::move(rates);
    return g;
}

Generator Generator::real(BooleanMeasure m, Matrix<double> rates) {
    check_shape(m, rates.rows(), rates.cols());
    Generator g;
    g.measure_ = std::move(m);
    g.exact_ = false;
    g.rates_d_ = std::move(rates);
    return g;
}

const Matrix<Rational>& Generator::exact_rates() const {
    if (!exact_) throw DomainError("generator carries real rates; exact view unavailable");
    return rates_q_;
}

// ---- validate ---------------------------------------------------------------

namespace {

template <class T>
void validate_structure(const Generator& g) {
    const auto& q = rates_as<T>(g);
    const auto& m = g.measure();
    const auto& w = weights_as<T>(g.measure());
    const int s = m.size();

    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (i != j && q(i, j) < T(0))
                throw ValidationError("negative rate " + std::to_string(to_double(q(i, j))) +
                                      " from " + m.state(i).to_string() + " to " +
                                      m.state(j).to_string());

    for (int i = 0; i < s; ++i) {
        T sum(0);
        for (int j = 0; j < s; ++j) sum += q(i, j);
        bool bad;
        if constexpr (std::is_same_v<T, Rational>)
            bad = (sum != 0);
        else
            bad = (std::abs(sum) > 1e-12);
        if (bad)
            throw ValidationError("row of state " + m.state(i).to_string() + " sums to " +
                                  std::to_string(to_double(sum)) + ", not zero");
    }

    double worst = 0;
    int wi = -1, wj = -1;
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j) {
            const T a = w[static_cast<size_t>(i)] * q(i, j);
            const T b = w[static_cast<size_t>(j)] * q(j, i);
            if (a == T(0) && b == T(0)) continue;
            const double ad = to_double(a), bd = to_double(b);
            const double rel = std::abs(ad - bd) / std::max(std::abs(ad), std::abs(bd));
            if (rel > worst) {
                worst = rel;
                wi = i;
                wj = j;
            }
            if constexpr (std::is_same_v<T, Rational>) {
                if (a != b)
                    throw ValidationError("detailed balance fails exactly between " +
                                          m.state(i).to_string() + " and " +
                                          m.state(j).to_string());
            }
        }
    if (worst > 1e-12)
        throw ValidationError("detailed balance residual " + std::to_string(worst) +
                              " between " + m.state(wi).to_string() + " and " +
                              m.state(wj).to_string() + " exceeds 1e-12");
}

template <class T>
void fill_stats(const Generator& g, ChainStats& st) {
    const auto& q = rates_as<T>(g);
    const auto& m = g.measure();
    const int s = m.size();

    T delta(0);
    for (int i = 0; i < s; ++i)
        if (-q(i, i) > delta) delta = -q(i, i);

    bool any_pair = false;
    T mval(0), Mval(0);
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j) {
            if (!flip_or_swap(m.state(i), m.state(j))) continue;
            const T lo = std::min(q(i, j), q(j, i));
            const T hi = std::max(q(i, j), q(j, i));
            if (!any_pair) {
                mval = lo;
                Mval = hi;
                any_pair = true;
            } else {
                mval = std::min(mval, lo);
                Mval = std::min(Mval, hi);
            }
        }

    st.delta = to_double(delta);
    st.pairs_vacuous = !any_pair;
    if (any_pair) {
        st.m = to_double(mval);
        st.M = to_double(Mval);
    } else {
        st.m = std::numeric_limits<double>::infinity();
        st.M = std::numeric_limits<double>::infinity();
    }

    st.flip_swap = true;
    for (int i = 0; i < s && st.flip_swap; ++i)
        for (int j = 0; j < s; ++j)
            if (i != j && q(i, j) > T(0) && !flip_or_swap(m.state(i), m.state(j))) {
                st.flip_swap = false;
                break;
            }

    if constexpr (std::is_same_v<T, Rational>) {
        st.normalized = delta <= 1;
        st.delta_exact = delta;
        if (any_pair) {
            st.m_exact = mval;
            st.M_exact = Mval;
        }
    } else {
        st.normalized = st.delta <= 1.0 + 1e-12;
    }
}

double reversibility_residual(const Generator& g) {
    const auto& m = g.measure();
    double worst = 0;
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) {
            const double a = m.weight(i) * g.rate(i, j);
            const double b = m.weight(j) * g.rate(j, i);
            if (a == 0 && b == 0) continue;
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
        }
    return worst;
}

} // namespace

ChainStats validate(const Generator& g) {
    ChainStats st;
    if (g.is_exact()) {
        validate_structure<Rational>(g);
        fill_stats<Rational>(g, st);
    } else {
        validate_structure<double>(g);
        fill_stats<double>(g, st);
    }
    st.reversibility_residual = reversibility_residual(g);
    return st;
}

// ---- builders ---------------------------------------------------------------

namespace {

template <class T>
Matrix<T> mcmc_rates(const BooleanMeasure& m, const T& inv_2kn) {
    const auto& w = weights_as<T>(m);
    const int s = m.size();
    Matrix<T> q(s, s, T(0));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            if (i == j || !flip_or_swap(m.state(i), m.state(j))) continue;
            T ratio = w[static_cast<size_t>(j)] / w[static_cast<size_t>(i)];
            if (ratio > T(1)) ratio = T(1);
            q(i, j) = inv_2kn * ratio;
        }
    for (int i = 0; i < s; ++i) {
        T sum(0);
        for (int j = 0; j < s; ++j)
            if (j != i) sum += q(i, j);
        q(i, i) = -sum;
    }
    return q;
}

} // namespace

Generator build_mcmc(const BooleanMeasure& m) {
    if (m.size() == 0) throw InputError("empty support");
    const int n = m.dim();
    if (m.is_exact()) {
        const Rational k = m.homogeneity() ? Rational(*m.homogeneity()) : Rational(n, 2);
        if (k == 0) {
            // point mass at the all-zero state: no moves, zero generator
            return Generator::exact(m, Matrix<Rational>(m.size(), m.size(), Rational(0)));
        }
        const Rational inv = Rational(1) / (Rational(2) * k * Rational(n));
        return Generator::exact(m, mcmc_rates<Rational>(m, inv));
    }
    const double k = m.homogeneity() ? static_cast<double>(*m.homogeneity()) : n / 2.0;
    if (k == 0)
        return Generator::real(m, Matrix<double>(m.size(), m.size(), 0.0));
    return Generator::real(m, mcmc_rates<double>(m, 1.0 / (2.0 * k * n)));
}

Generator build_bases_exchange(const BooleanMeasure& m) {
    if (m.size() == 0) throw InputError("empty support");
    auto k = m.homogeneity();
    if (!k)
        throw DomainError("exchange walk needs a homogeneous measure");
    if (m.is_exact()) {
        const auto& w = m.exact_weights();
        for (const auto& wi : w)
            if (wi != w.front())
                throw DomainError("exchange walk needs a uniform measure");
    } else {
        for (double wi : m.weights())
            if (std::abs(wi - m.weight(0)) > 1e-12)
                throw DomainError("exchange walk needs a uniform measure");
    }
    if (*k == 0)
        return m.is_exact()
                   ? Generator::exact(m, Matrix<Rational>(m.size(), m.size(), Rational(0)))
                   : Generator::real(m, Matrix<double>(m.size(), m.size(), 0.0));
    // on a uniform measure every acceptance ratio is 1, so this is the MCMC walk
    return build_mcmc(m);
}

Generator normalize(const Generator& g) {
    if (g.is_exact()) {
        const auto& q = g.exact_rates();
        Rational delta(0);
        for (int i = 0; i < g.size(); ++i)
            if (-q(i, i) > delta) delta = -q(i, i);
        if (delta == 0) throw DomainError("zero generator cannot be normalized");
        Matrix<Rational> out(g.size(), g.size());
        for (int i = 0; i < g.size(); ++i)
            for (int j = 0; j < g.size(); ++j) out(i, j) = q(i, j) / delta;
        return Generator::exact(g.measure(), std::move(out));
    }
    double delta = 0;
    for (int i = 0; i < g.size(); ++i) delta = std::max(delta, -g.rate(i, i));
    if (delta == 0) throw DomainError("zero generator cannot be normalized");
    Matrix<double> out(g.size(), g.size());
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j) out(i, j) = g.rate(i, j) / delta;
    return Generator::real(g.measure(), std::move(out));
}

Generator generator_from_rates(const BooleanMeasure& m, const std::vector<RateEntry>& entries) {
    if (m.size() == 0) throw InputError("empty support");
    bool exact = m.is_exact();
    for (const auto& e : entries) {
        if (e.from < 0 || e.from >= m.size() || e.to < 0 || e.to >= m.size())
            throw InputError("rate entry references a state outside the support");
        if (e.from == e.to)
            throw InputError("diagonal entries are reconstructed; do not list them");
        if (!e.rate_exact) exact = false;
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& e : entries)
        if (!seen.insert({e.from, e.to}).second)
            throw InputError("duplicate rate entry " + m.state(e.from).to_string() + " -> " +
                             m.state(e.to).to_string());

    Generator g;
    if (exact) {
        Matrix<Rational> q(m.size(), m.size(), Rational(0));
        for (const auto& e : entries) q(e.from, e.to) = *e.rate_exact;
        for (int i = 0; i < m.size(); ++i) {
            Rational sum(0);
            for (int j = 0; j < m.size(); ++j)
                if (j != i) sum += q(i, j);
            q(i, i) = -sum;
        }
        g = Generator::exact(m, std::move(q));
    } else {
        Matrix<double> q(m.size(), m.size(), 0.0);
        for (const auto& e : entries) q(e.from, e.to) = e.rate;
        for (int i = 0; i < m.size(); ++i) {
            double sum = 0;
            for (int j = 0; j < m.size(); ++j)
                if (j != i) sum += q(i, j);
            q(i, i) = -sum;
        }
        g = Generator::real(m, std::move(q));
    }
    validate(g);
    return g;
}

std::vector<std::vector<int>> communicating_classes(const Generator& g) {
    const int s = g.size();
    std::vector<int> parent(static_cast<size_t>(s));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j) {
            bool linked;
            if (g.is_exact())
                linked = g.exact_rates()(i, j) > 0 || g.exact_rates()(j, i) > 0;
            else
                linked = g.rate(i, j) > 0 || g.rate(j, i) > 0;
            if (linked) parent[static_cast<size_t>(find(i))] = find(j);
        }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < s; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

void require_irreducible(const Generator& g) {
    auto classes = communicating_classes(g);
    if (classes.size() <= 1) return;
    std::ostringstream os;
    os << "generator is reducible; communicating classes:";
    for (const auto& cls : classes) {
        os << " {";
        for (size_t k = 0; k < cls.size(); ++k) {
            if (k) os << ",";
            os << g.measure().state(cls[k]).to_string();
        }
        os << "}";
    }
    throw ValidationError(os.str());
}

} // namespace coverwalk
