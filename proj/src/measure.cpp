#include "coverwalk/measure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace coverwalk {

namespace {

constexpr int kFullCubeLimit = 16; // full 2^n enumerations stay at desk scale

std::optional<int> common_weight(const std::vector<BitVector>& support) {
    if (support.empty()) return std::nullopt;
    const int k = support.front().weight();
    for (const auto& x : support)
        if (x.weight() != k) return std::nullopt;
    return k;
}

template <class T>
struct Prepared {
    std::vector<BitVector> support;
    std::vector<T> weights;
};

template <class T>
Prepared<T> prepare(int n, std::vector<BitVector> support, std::vector<T> weights) {
    if (support.empty()) throw InputError("measure support is empty");
    if (support.size() != weights.size())
        throw InputError("support and weight counts differ");
    std::vector<size_t> order(support.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return support[a].mask() < support[b].mask(); });
    Prepared<T> out;
    out.support.reserve(support.size());
    out.weights.reserve(weights.size());
    for (size_t idx : order) {
        const BitVector& x = support[idx];
        if (x.n() != n)
            throw InputError("state " + x.to_string() + " has dimension " +
                             std::to_string(x.n()) + ", expected " + std::to_string(n));
        if (!out.support.empty() && out.support.back() == x)
            throw InputError("duplicate support state " + x.to_string());
        if (!(weights[idx] > T(0)))
            throw InputError("non-positive weight at state " + x.to_string());
        out.support.push_back(x);
        out.weights.push_back(weights[idx]);
    }
    return out;
}

} // namespace

BooleanMeasure BooleanMeasure::exact(int n, std::vector<BitVector> support,
                                     std::vector<Rational> weights,
                                     std::vector<std::string> notes) {
    auto prep = prepare<Rational>(n, std::move(support), std::move(weights));
    Rational total(0);
    for (const auto& w : prep.weights) total += w;
    BooleanMeasure m;
    m.n_ = n;
    m.support_ = std::move(prep.support);
    for (auto& w : prep.weights) w /= total;
    m.weights_real_.reserve(prep.weights.size());
    for (const auto& w : prep.weights) m.weights_real_.push_back(to_double(w));
    m.lane_ = std::move(prep.weights);
    m.homogeneity_ = common_weight(m.support_);
    m.notes_ = std::move(notes);
    return m;
}

BooleanMeasure BooleanMeasure::real(int n, std::vector<BitVector> support,
                                    std::vector<double> weights,
                                    std::vector<std::string> notes) {
    auto prep = prepare<double>(n, std::move(support), std::move(weights));
    for (double w : prep.weights)
        if (!std::isfinite(w)) throw InputError("non-finite weight");
    double total = 0;
    for (double w : prep.weights) total += w;
    BooleanMeasure m;
    m.n_ = n;
    m.support_ = std::move(prep.support);
    for (auto& w : prep.weights) w /= total;
    m.weights_real_ = prep.weights;
    m.lane_ = std::move(prep.weights);
    m.homogeneity_ = common_weight(m.support_);
    m.notes_ = std::move(notes);
    return m;
}

const std::vector<Rational>& BooleanMeasure::exact_weights() const {
    if (!is_exact())
        throw DomainError("measure carries real weights; exact weights unavailable");
    return std::get<std::vector<Rational>>(lane_);
}

int BooleanMeasure::index_of(const BitVector& x) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), x);
    if (it == support_.end() || !(*it == x)) return -1;
    return static_cast<int>(it - support_.begin());
}

// ---- constructors ----------------------------------------------------------

BooleanMeasure make_explicit_exact(int n,
                                   const std::vector<std::pair<BitVector, Rational>>& table) {
    std::vector<BitVector> support;
    std::vector<Rational> weights;
    Rational total(0);
    for (const auto& [x, w] : table) {
        support.push_back(x);
        weights.push_back(w);
        total += w;
    }
    std::vector<std::string> notes;
    if (!support.empty() && total != 1)
        notes.push_back("input weights summed to " + format_rational(total) +
                        "; renormalized");
    return BooleanMeasure::exact(n, std::move(support), std::move(weights), std::move(notes));
}

BooleanMeasure make_explicit_real(int n,
                                  const std::vector<std::pair<BitVector, double>>& table) {
    std::vector<BitVector> support;
    std::vector<double> weights;
    double total = 0;
    for (const auto& [x, w] : table) {
        support.push_back(x);
        weights.push_back(w);
        total += w;
    }
    std::vector<std::string> notes;
    if (!support.empty() && std::abs(total - 1.0) > 1e-9)
        notes.push_back("input weights summed to " + std::to_string(total) + "; renormalized");
    return BooleanMeasure::real(n, std::move(support), std::move(weights), std::move(notes));
}

namespace {

void check_product_params(const std::vector<Rational>& p) {
    const int n = static_cast<int>(p.size());
    if (n < 1) throw InputError("product law needs at least one coordinate");
    if (n > kFullCubeLimit)
        throw InputError("product law enumerates the full cube; n is capped at " +
                         std::to_string(kFullCubeLimit));
    for (const auto& pi : p)
        if (!(pi > 0 && pi < 1))
            throw InputError("product parameter " + format_rational(pi) +
                             " outside (0,1)");
}

Rational product_weight(const std::vector<Rational>& p, std::uint32_t mask) {
    Rational w(1);
    for (size_t i = 0; i < p.size(); ++i)
        w *= (mask >> i) & 1u ? p[i] : Rational(1) - p[i];
    return w;
}

} // namespace

BooleanMeasure make_product(const std::vector<Rational>& p) {
    check_product_params(p);
    const int n = static_cast<int>(p.size());
    std::vector<BitVector> support;
    std::vector<Rational> weights;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        support.emplace_back(n, mask);
        weights.push_back(product_weight(p, mask));
    }
    return BooleanMeasure::exact(n, std::move(support), std::move(weights));
}

BooleanMeasure make_conditioned_sum(const std::vector<Rational>& p, int k) {
    check_product_params(p);
    const int n = static_cast<int>(p.size());
    if (k < 0 || k > n)
        throw DomainError("slice k=" + std::to_string(k) + " is empty for n=" +
                          std::to_string(n));
    std::vector<BitVector> support;
    std::vector<Rational> weights;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        support.emplace_back(n, mask);
        weights.push_back(product_weight(p, mask));
    }
    return BooleanMeasure::exact(n, std::move(support), std::move(weights));
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    bool merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<size_t>(a)] = b;
        return true;
    }
};

} // namespace

BooleanMeasure make_spanning_tree(int vertices, const std::vector<std::pair<int, int>>& edges) {
    const int m = static_cast<int>(edges.size());
    if (vertices < 2) throw InputError("spanning-tree law needs at least two vertices");
    if (m < 1) throw InputError("spanning-tree law needs at least one edge");
    if (m > 20) throw InputError("edge count capped at 20 for tree enumeration");
    for (const auto& [a, b] : edges) {
        if (a < 1 || a > vertices || b < 1 || b > vertices)
            throw InputError("edge endpoint outside [1, vertices]");
        if (a == b) throw InputError("self-loops cannot appear in a spanning tree");
    }
    {
        UnionFind uf(vertices);
        int merges = 0;
        for (const auto& [a, b] : edges) merges += uf.merge(a - 1, b - 1) ? 1 : 0;
        if (merges != vertices - 1)
            throw DomainError("graph is disconnected: no spanning trees exist");
    }
    std::vector<BitVector> support;
    const int need = vertices - 1;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) != need) continue;
        UnionFind uf(vertices);
        int merges = 0;
        bool acyclic = true;
        for (int e = 0; e < m && acyclic; ++e) {
            if (!((mask >> e) & 1u)) continue;
            if (uf.merge(edges[static_cast<size_t>(e)].first - 1,
                         edges[static_cast<size_t>(e)].second - 1))
                ++merges;
            else
                acyclic = false;
        }
        if (acyclic && merges == need) support.emplace_back(m, mask);
    }
    std::vector<Rational> weights(support.size(), Rational(1));
    return BooleanMeasure::exact(m, std::move(support), std::move(weights));
}

BooleanMeasure make_l_ensemble(const Matrix<double>& L) {
    const int n = L.rows();
    if (n < 1 || L.cols() != n) throw InputError("L must be square and non-empty");
    if (n > kFullCubeLimit)
        throw InputError("L-ensemble enumerates the full cube; n is capped at " +
                         std::to_string(kFullCubeLimit));
    Eigen::MatrixXd E(n, n);
    double scale = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            E(i, j) = L(i, j);
            scale = std::max(scale, std::abs(L(i, j)));
        }
    const double sym_tol = 1e-12 * std::max(scale, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(E(i, j) - E(j, i)) > sym_tol)
                throw ValidationError("L is not symmetric at entry (" + std::to_string(i + 1) +
                                      "," + std::to_string(j + 1) + ")");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (E + E.transpose()),
                                                      Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-10 * std::max(scale, 1.0))
        throw ValidationError("L is not positive semi-definite: min eigenvalue " +
                              std::to_string(min_eig));

    std::vector<BitVector> support;
    std::vector<double> weights;
    double max_w = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double det = 1.0;
        const int s = std::popcount(mask);
        if (s > 0) {
            Eigen::MatrixXd sub(s, s);
            std::vector<int> idx;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1u) idx.push_back(i);
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b)
                    sub(a, b) = E(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
            det = sub.determinant();
        }
        support.emplace_back(n, mask);
        weights.push_back(det);
        max_w = std::max(max_w, det);
    }
    if (!(max_w > 0)) throw ValidationError("all principal minors vanish; empty support");

    std::vector<std::string> notes;
    std::vector<BitVector> kept;
    std::vector<double> kept_w;
    int dropped = 0;
    for (size_t i = 0; i < support.size(); ++i) {
        if (weights[i] > 1e-14 * max_w) {
            kept.push_back(support[i]);
            kept_w.push_back(weights[i]);
        } else {
            ++dropped;
        }
    }
    if (dropped > 0)
        notes.push_back(std::to_string(dropped) +
                        " states below the 1e-14 relative weight threshold were dropped; "
                        "weights renormalized");
    return BooleanMeasure::real(n, std::move(kept), std::move(kept_w), std::move(notes));
}

// ---- operations ------------------------------------------------------------

namespace {

std::string describe_assignment(const std::map<int, int>& assignment) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [coord, bit] : assignment) {
        if (!first) os << ", ";
        os << "x" << coord << "=" << bit;
        first = false;
    }
    os << "}";
    return os.str();
}

void check_assignment(const BooleanMeasure& m, const std::map<int, int>& assignment) {
    if (assignment.empty()) throw InputError("empty assignment");
    for (const auto& [coord, bit] : assignment) {
        if (coord < 1 || coord > m.dim())
            throw InputError("assignment coordinate " + std::to_string(coord) +
                             " outside [1," + std::to_string(m.dim()) + "]");
        if (bit != 0 && bit != 1)
            throw InputError("assignment value for x" + std::to_string(coord) +
                             " must be 0 or 1");
    }
    if (static_cast<int>(assignment.size()) >= m.dim())
        throw InputError("assignment must leave at least one free coordinate");
}

bool matches(const BitVector& x, const std::map<int, int>& assignment) {
    for (const auto& [coord, bit] : assignment)
        if (x.get(coord) != bit) return false;
    return true;
}

template <class T>
ConditionResult condition_lane(const BooleanMeasure& m, const std::map<int, int>& assignment) {
    std::vector<int> fixed;
    for (const auto& [coord, bit] : assignment) fixed.push_back(coord);

    std::vector<BitVector> support;
    std::vector<T> weights;
    const auto& w = weights_as<T>(m);
    for (int i = 0; i < m.size(); ++i) {
        if (!matches(m.state(i), assignment)) continue;
        support.push_back(drop_coords(m.state(i), fixed));
        weights.push_back(w[static_cast<size_t>(i)]);
    }
    if (support.empty())
        throw DomainError("conditioning event " + describe_assignment(assignment) +
                          " has probability zero");
    ConditionResult out;
    const int nn = m.dim();
    for (int c = 1; c <= nn; ++c)
        if (!assignment.count(c)) out.kept.push_back(c);
    if constexpr (std::is_same_v<T, Rational>)
        out.measure = BooleanMeasure::exact(nn - static_cast<int>(assignment.size()),
                                            std::move(support), std::move(weights));
    else
        out.measure = BooleanMeasure::real(nn - static_cast<int>(assignment.size()),
                                           std::move(support), std::move(weights));
    return out;
}

} // namespace

ConditionResult condition(const BooleanMeasure& m, const std::map<int, int>& assignment) {
    check_assignment(m, assignment);
    return m.is_exact() ? condition_lane<Rational>(m, assignment)
                        : condition_lane<double>(m, assignment);
}

namespace {

template <class T>
SplitResult split_lane(const BooleanMeasure& m, int l) {
    std::vector<BitVector> s0, s1;
    std::vector<T> w0, w1;
    const auto& w = weights_as<T>(m);
    T mass0(0), mass1(0);
    for (int i = 0; i < m.size(); ++i) {
        if (m.state(i).get(l) == 0) {
            s0.push_back(m.state(i));
            w0.push_back(w[static_cast<size_t>(i)]);
            mass0 += w[static_cast<size_t>(i)];
        } else {
            s1.push_back(m.state(i));
            w1.push_back(w[static_cast<size_t>(i)]);
            mass1 += w[static_cast<size_t>(i)];
        }
    }
    if (s0.empty() || s1.empty())
        throw DomainError("split at coordinate " + std::to_string(l) + ": block x" +
                          std::to_string(l) + "=" + (s0.empty() ? "0" : "1") + " is empty");
    SplitResult out;
    out.pibar = {to_double(mass0), to_double(mass1)};
    if constexpr (std::is_same_v<T, Rational>) {
        out.exact = true;
        out.pibar_exact = {mass0, mass1};
        out.block0 = BooleanMeasure::exact(m.dim(), std::move(s0), std::move(w0));
        out.block1 = BooleanMeasure::exact(m.dim(), std::move(s1), std::move(w1));
    } else {
        out.block0 = BooleanMeasure::real(m.dim(), std::move(s0), std::move(w0));
        out.block1 = BooleanMeasure::real(m.dim(), std::move(s1), std::move(w1));
    }
    return out;
}

} // namespace

SplitResult split(const BooleanMeasure& m, int l) {
    if (l < 1 || l > m.dim())
        throw InputError("split coordinate " + std::to_string(l) + " outside [1," +
                         std::to_string(m.dim()) + "]");
    return m.is_exact() ? split_lane<Rational>(m, l) : split_lane<double>(m, l);
}

} // namespace coverwalk
