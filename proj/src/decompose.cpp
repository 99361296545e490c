#include "coverwalk/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coverwalk/errors.hpp"

namespace coverwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
T min_v(const T& a, const T& b) { return a < b ? a : b; }
template <class T>
T max_v(const T& a, const T& b) { return a < b ? b : a; }

template <class T>
const Matrix<T>& mass_as(const Coupling& c);
template <>
const Matrix<Rational>& mass_as<Rational>(const Coupling& c) { return c.exact_mass_matrix(); }
template <>
const Matrix<double>& mass_as<double>(const Coupling& c) { return c.mass_matrix(); }

template <class T>
std::array<T, 2> split_pibar(const SplitResult& sp);
template <>
std::array<Rational, 2> split_pibar<Rational>(const SplitResult& sp) { return sp.pibar_exact; }
template <>
std::array<double, 2> split_pibar<double>(const SplitResult& sp) {
    return {sp.pibar[0], sp.pibar[1]};
}

double as_double(const Rational& q) { return to_double(q); }
double as_double(double d) { return d; }

template <class T>
Matrix<T> restrict_rates(const Matrix<T>& parent, const std::vector<int>& idx) {
    const int s = static_cast<int>(idx.size());
    Matrix<T> r(s, s);
    for (int i = 0; i < s; ++i) {
        T row_sum{};
        for (int j = 0; j < s; ++j) {
            if (i == j) continue;
            r(i, j) = parent(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
            row_sum += r(i, j);
        }
        r(i, i) = -row_sum;
    }
    return r;
}

Generator make_restriction(const Generator& g, const BooleanMeasure& block,
                           const std::vector<int>& idx) {
    if (g.is_exact()) return Generator::exact(block, restrict_rates(g.exact_rates(), idx));
    return Generator::real(block, restrict_rates(g.rates(), idx));
}

std::vector<int> block_indices(const BooleanMeasure& parent, int coordinate, int bit) {
    std::vector<int> idx;
    for (int i = 0; i < parent.size(); ++i)
        if (parent.state(i).get(coordinate) == bit) idx.push_back(i);
    return idx;
}

} // namespace

// ---- projection / restriction --------------------------------------------------

Decomposition project_restrict(const Generator& g, const std::vector<std::vector<int>>& blocks) {
    const auto& m = g.measure();
    const int s = m.size();
    const int nb = static_cast<int>(blocks.size());
    if (nb == 0) throw InputError("a partition needs at least one block");

    std::vector<int> owner(static_cast<size_t>(s), -1);
    for (int b = 0; b < nb; ++b) {
        if (blocks[static_cast<size_t>(b)].empty())
            throw InputError("partition block " + std::to_string(b) + " is empty");
        for (int i : blocks[static_cast<size_t>(b)]) {
            if (i < 0 || i >= s)
                throw InputError("partition refers to support index " + std::to_string(i) +
                                 " outside 0.." + std::to_string(s - 1));
            if (owner[static_cast<size_t>(i)] != -1)
                throw InputError("support index " + std::to_string(i) +
                                 " appears in two partition blocks");
            owner[static_cast<size_t>(i)] = b;
        }
    }
    for (int i = 0; i < s; ++i)
        if (owner[static_cast<size_t>(i)] == -1)
            throw InputError("support index " + std::to_string(i) + " is not covered by the partition");

    validate(g);

    Decomposition d;
    d.chain = g;
    d.blocks = blocks;
    d.exact = g.is_exact();

    d.pibar.assign(static_cast<size_t>(nb), 0.0);
    d.qbar = Matrix<double>(nb, nb);
    if (d.exact) {
        d.pibar_exact.assign(static_cast<size_t>(nb), Rational(0));
        d.qbar_exact = Matrix<Rational>(nb, nb);
    }

    for (int b = 0; b < nb; ++b)
        for (int i : blocks[static_cast<size_t>(b)]) {
            d.pibar[static_cast<size_t>(b)] += m.weight(i);
            if (d.exact) d.pibar_exact[static_cast<size_t>(b)] += m.exact_weight(i);
        }

    for (int bi = 0; bi < nb; ++bi) {
        double row = 0;
        Rational row_q{};
        for (int bj = 0; bj < nb; ++bj) {
            if (bi == bj) continue;
            double flux = 0;
            Rational flux_q{};
            for (int x : blocks[static_cast<size_t>(bi)])
                for (int y : blocks[static_cast<size_t>(bj)]) {
                    flux += m.weight(x) * g.rate(x, y);
                    if (d.exact) flux_q += m.exact_weight(x) * g.exact_rates()(x, y);
                }
            d.qbar(bi, bj) = flux / d.pibar[static_cast<size_t>(bi)];
            row += d.qbar(bi, bj);
            if (d.exact) {
                d.qbar_exact(bi, bj) = flux_q / d.pibar_exact[static_cast<size_t>(bi)];
                row_q += d.qbar_exact(bi, bj);
            }
        }
        d.qbar(bi, bi) = -row;
        if (d.exact) d.qbar_exact(bi, bi) = -row_q;
    }

    // projection reversibility: exact on the exact lane, 1e-12 relative otherwise
    for (int bi = 0; bi < nb; ++bi)
        for (int bj = bi + 1; bj < nb; ++bj) {
            if (d.exact) {
                const Rational lhs = d.pibar_exact[static_cast<size_t>(bi)] * d.qbar_exact(bi, bj);
                const Rational rhs = d.pibar_exact[static_cast<size_t>(bj)] * d.qbar_exact(bj, bi);
                if (lhs != rhs)
                    throw ValidationError("projection chain violates detailed balance between blocks " +
                                          std::to_string(bi) + " and " + std::to_string(bj));
            } else {
                const double lhs = d.pibar[static_cast<size_t>(bi)] * d.qbar(bi, bj);
                const double rhs = d.pibar[static_cast<size_t>(bj)] * d.qbar(bj, bi);
                if (std::abs(lhs - rhs) > 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1e-300}))
                    throw ValidationError("projection chain violates detailed balance between blocks " +
                                          std::to_string(bi) + " and " + std::to_string(bj));
            }
        }

    for (int b = 0; b < nb; ++b) {
        std::vector<BitVector> states;
        std::vector<double> w_d;
        std::vector<Rational> w_q;
        for (int i : blocks[static_cast<size_t>(b)]) {
            states.push_back(m.state(i));
            w_d.push_back(m.weight(i));
            if (d.exact) w_q.push_back(m.exact_weight(i));
        }
        BooleanMeasure bm = d.exact ? BooleanMeasure::exact(m.dim(), states, w_q)
                                    : BooleanMeasure::real(m.dim(), states, w_d);
        // factories sort ascending; block index lists must already be ascending
        // for restriction rates to align
        std::vector<int> idx = blocks[static_cast<size_t>(b)];
        std::sort(idx.begin(), idx.end());
        d.restrictions.push_back(make_restriction(g, bm, idx));
    }
    return d;
}

Decomposition decompose_at(const Generator& g, int coordinate) {
    const auto& m = g.measure();
    if (coordinate < 1 || coordinate > m.dim())
        throw InputError("coordinate " + std::to_string(coordinate) + " outside 1.." +
                         std::to_string(m.dim()));
    auto b0 = block_indices(m, coordinate, 0);
    auto b1 = block_indices(m, coordinate, 1);
    if (b0.empty() || b1.empty())
        throw DomainError("coordinate " + std::to_string(coordinate) +
                          " is constant on the support");
    Decomposition d = project_restrict(g, {b0, b1});
    Coupling kappa = flip_swap_coupling(m, coordinate);
    d.couplings.emplace(std::make_pair(0, 1), kappa);
    d.couplings.emplace(std::make_pair(1, 0), kappa.transposed());
    return d;
}

// ---- coupling quality ----------------------------------------------------------

namespace {

template <class T>
void chi_scan(const Decomposition& d, ChiReport& out, T& best, bool& any) {
    const auto& m = d.chain.measure();
    const auto& rates = rates_as<T>(d.chain);
    const auto& weights = weights_as<T>(m);
    const int nb = static_cast<int>(d.blocks.size());

    std::vector<T> pibar(static_cast<size_t>(nb));
    Matrix<T> qbar(nb, nb);
    if constexpr (std::is_same_v<T, Rational>) {
        pibar = d.pibar_exact;
        qbar = d.qbar_exact;
    } else {
        pibar = d.pibar;
        qbar = d.qbar;
    }

    for (int bi = 0; bi < nb; ++bi)
        for (int bj = 0; bj < nb; ++bj) {
            if (bi == bj) continue;
            if (!(qbar(bi, bj) > 0)) continue;
            auto it = d.couplings.find({bi, bj});
            if (it == d.couplings.end())
                throw DomainError("no coupling attached for block pair (" + std::to_string(bi) +
                                  ", " + std::to_string(bj) + ") with positive projection rate");
            const auto& kappa = mass_as<T>(it->second);
            const auto& bi_idx = d.blocks[static_cast<size_t>(bi)];
            const auto& bj_idx = d.blocks[static_cast<size_t>(bj)];
            for (size_t ii = 0; ii < bi_idx.size(); ++ii)
                for (size_t jj = 0; jj < bj_idx.size(); ++jj) {
                    const T& mass = kappa(static_cast<int>(ii), static_cast<int>(jj));
                    if (!(mass > 0)) continue;
                    const int x = bi_idx[ii], y = bj_idx[jj];
                    const T num = weights[static_cast<size_t>(x)] * rates(x, y);
                    const T den = pibar[static_cast<size_t>(bi)] * qbar(bi, bj) * mass;
                    const T ratio = num / den;
                    if (!any || ratio < best) best = ratio;
                    any = true;
                    ChiQuad q;
                    q.block_i = bi;
                    q.block_j = bj;
                    q.x = m.state(x).to_string();
                    q.y = m.state(y).to_string();
                    q.ratio = as_double(ratio);
                    const T c1 = rates(x, y) / qbar(bi, bj);
                    T c2{};
                    if (qbar(bj, bi) > 0) c2 = rates(y, x) / qbar(bj, bi);
                    q.crude_floor = as_double(max_v(c1, c2));
                    out.quads.push_back(std::move(q));
                }
        }
}

} // namespace

ChiReport chi(const Decomposition& d) {
    ChiReport out;
    bool any = false;
    if (d.exact) {
        Rational best{};
        chi_scan<Rational>(d, out, best, any);
        if (any) {
            out.value = to_double(best);
            out.value_exact = best;
            out.zero = best == 0;
        }
    } else {
        double best = 0;
        chi_scan<double>(d, out, best, any);
        if (any) {
            out.value = best;
            out.zero = best == 0;
        }
    }
    if (!any) out.value = kInf;
    return out;
}

// ---- decomposition identities ---------------------------------------------------

namespace {

double psi_ff(double u, double v) { return (u - v) * (u - v); }
double psi_flogf(double u, double v) { return (u - v) * (std::log(u) - std::log(v)); }
double psi_sqrt(double u, double v) {
    const double d = std::sqrt(u) - std::sqrt(v);
    return d * d;
}

double mean_on(const std::vector<double>& w, const Observable& f, const std::vector<int>& idx,
               double total) {
    double s = 0;
    for (int i : idx) s += w[static_cast<size_t>(i)] * f[static_cast<size_t>(i)];
    return s / total;
}

double rel_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-12});
}

} // namespace

IdentityReport identity_check(const Decomposition& d, const Observable& f) {
    const auto& m = d.chain.measure();
    if (static_cast<int>(f.size()) != m.size())
        throw InputError("observable has " + std::to_string(f.size()) +
                         " entries for a support of size " + std::to_string(m.size()));
    for (double v : f)
        if (!(v > 0)) throw DomainError("identity check needs a strictly positive observable");

    const auto& w = m.weights();
    const int nb = static_cast<int>(d.blocks.size());

    // block means and the projected observable
    Observable fbar(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b)
        fbar[static_cast<size_t>(b)] =
            mean_on(w, f, d.blocks[static_cast<size_t>(b)], d.pibar[static_cast<size_t>(b)]);

    auto variance_on = [&](const std::vector<int>& idx, double total, double mu) {
        double s = 0;
        for (int i : idx) {
            const double dlt = f[static_cast<size_t>(i)] - mu;
            s += w[static_cast<size_t>(i)] / total * dlt * dlt;
        }
        return s;
    };
    auto entropy_on = [&](const std::vector<int>& idx, double total, double mu) {
        double s = 0;
        for (int i : idx)
            s += w[static_cast<size_t>(i)] / total * f[static_cast<size_t>(i)] *
                 std::log(f[static_cast<size_t>(i)] / mu);
        return s;
    };

    std::vector<int> all(static_cast<size_t>(m.size()));
    for (int i = 0; i < m.size(); ++i) all[static_cast<size_t>(i)] = i;
    const double grand_mean = mean_on(w, f, all, 1.0);

    // DEC1, variance and entropy flavours
    double var_blocks = 0, ent_blocks = 0;
    for (int b = 0; b < nb; ++b) {
        const auto& idx = d.blocks[static_cast<size_t>(b)];
        const double pb = d.pibar[static_cast<size_t>(b)];
        var_blocks += pb * variance_on(idx, pb, fbar[static_cast<size_t>(b)]);
        ent_blocks += pb * entropy_on(idx, pb, fbar[static_cast<size_t>(b)]);
    }
    double var_proj = 0, ent_proj = 0;
    for (int b = 0; b < nb; ++b) {
        const double dlt = fbar[static_cast<size_t>(b)] - grand_mean;
        var_proj += d.pibar[static_cast<size_t>(b)] * dlt * dlt;
        ent_proj += d.pibar[static_cast<size_t>(b)] * fbar[static_cast<size_t>(b)] *
                    std::log(fbar[static_cast<size_t>(b)] / grand_mean);
    }

    IdentityReport r;
    r.dec1_variance = rel_residual(variance_on(all, 1.0, grand_mean), var_blocks + var_proj);
    r.dec1_entropy = rel_residual(entropy_on(all, 1.0, grand_mean), ent_blocks + ent_proj);

    // DEC2 for each Psi: whole-space local form vs blocks plus cross terms at true rates
    auto local_form = [&](auto&& psi) {
        double s = 0;
        for (int x = 0; x < m.size(); ++x)
            for (int y = 0; y < m.size(); ++y) {
                if (x == y) continue;
                const double rate = d.chain.rate(x, y);
                if (rate == 0) continue;
                s += 0.5 * w[static_cast<size_t>(x)] * rate *
                     psi(f[static_cast<size_t>(x)], f[static_cast<size_t>(y)]);
            }
        return s;
    };
    std::vector<int> owner(static_cast<size_t>(m.size()));
    for (int b = 0; b < nb; ++b)
        for (int i : d.blocks[static_cast<size_t>(b)]) owner[static_cast<size_t>(i)] = b;
    auto split_form = [&](auto&& psi) {
        double inside = 0, cross = 0;
        for (int x = 0; x < m.size(); ++x)
            for (int y = 0; y < m.size(); ++y) {
                if (x == y) continue;
                const double rate = d.chain.rate(x, y);
                if (rate == 0) continue;
                const double term = 0.5 * w[static_cast<size_t>(x)] * rate *
                                    psi(f[static_cast<size_t>(x)], f[static_cast<size_t>(y)]);
                if (owner[static_cast<size_t>(x)] == owner[static_cast<size_t>(y)])
                    inside += term;
                else
                    cross += term;
            }
        return inside + cross;
    };
    r.dec2_ff = rel_residual(local_form(psi_ff), split_form(psi_ff));
    r.dec2_flogf = rel_residual(local_form(psi_flogf), split_form(psi_flogf));
    r.dec2_sqrt = rel_residual(local_form(psi_sqrt), split_form(psi_sqrt));

    // Jensen gaps of the attached couplings
    r.jensen_ff = r.jensen_flogf = r.jensen_sqrt = kInf;
    for (const auto& [pair, kappa] : d.couplings) {
        const auto& bi_idx = d.blocks[static_cast<size_t>(pair.first)];
        const auto& bj_idx = d.blocks[static_cast<size_t>(pair.second)];
        double s_ff = 0, s_flogf = 0, s_sqrt = 0;
        for (size_t ii = 0; ii < bi_idx.size(); ++ii)
            for (size_t jj = 0; jj < bj_idx.size(); ++jj) {
                const double mass = kappa.mass(static_cast<int>(ii), static_cast<int>(jj));
                if (mass == 0) continue;
                const double fx = f[static_cast<size_t>(bi_idx[ii])];
                const double fy = f[static_cast<size_t>(bj_idx[jj])];
                s_ff += mass * psi_ff(fx, fy);
                s_flogf += mass * psi_flogf(fx, fy);
                s_sqrt += mass * psi_sqrt(fx, fy);
            }
        const double fi = fbar[static_cast<size_t>(pair.first)];
        const double fj = fbar[static_cast<size_t>(pair.second)];
        r.jensen_ff = std::min(r.jensen_ff, s_ff - psi_ff(fi, fj));
        r.jensen_flogf = std::min(r.jensen_flogf, s_flogf - psi_flogf(fi, fj));
        r.jensen_sqrt = std::min(r.jensen_sqrt, s_sqrt - psi_sqrt(fi, fj));
    }

    r.max_residual = std::max({r.dec1_variance, r.dec1_entropy, r.dec2_ff, r.dec2_flogf, r.dec2_sqrt});
    return r;
}

// ---- the recursive certificate ---------------------------------------------------

std::string target_name(Target t) {
    switch (t) {
        case Target::Lambda: return "lambda";
        case Target::Alpha: return "alpha";
        case Target::Rho: return "rho";
    }
    return "?";
}

namespace {

// subtree result in one arithmetic lane; an empty claimed means "no
// constraint" (leaf)
template <class T>
struct NodeOutcome {
    CertificateNode node;
    std::optional<T> claimed;
    bool ok = true;
};

template <class T>
bool bound_holds(const T& lhs, const T& rhs) {
    if constexpr (std::is_same_v<T, Rational>) {
        return lhs >= rhs;
    } else {
        return lhs >= rhs - 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
    }
}

template <class T>
T stat_m(const ChainStats& st);
template <>
Rational stat_m<Rational>(const ChainStats& st) { return *st.m_exact; }
template <>
double stat_m<double>(const ChainStats& st) { return st.m; }

template <class T>
T stat_M(const ChainStats& st);
template <>
Rational stat_M<Rational>(const ChainStats& st) { return *st.M_exact; }
template <>
double stat_M<double>(const ChainStats& st) { return st.M; }

template <class T>
NodeOutcome<T> certify_node(const Generator& g, Target target, const CertifyOptions& opts,
                            const std::string& path, std::vector<CertificateCheck>& checks) {
    const auto& m = g.measure();
    NodeOutcome<T> out;
    out.node.path = path;

    if (m.size() == 1) {
        out.node.leaf = true;
        out.node.state = m.state(0).to_string();
        out.node.claimed = kInf;
        return out;
    }

    if (opts.recheck_scp) {
        ScpOptions so;
        so.mode = ScpMode::Full;
        so.full_ceiling = std::max(so.full_ceiling, m.dim());
        const bool holds = check_scp(m, so).holds;
        checks.push_back({path, "covering property holds", holds ? 1.0 : 0.0, 1.0, holds});
        if (!holds) {
            out.ok = false;
            out.node.claimed = 0;
            out.claimed = T{};
            return out;
        }
    }

    int ell = 0;
    for (int c = 1; c <= m.dim() && ell == 0; ++c) {
        const auto b0 = block_indices(m, c, 0);
        if (!b0.empty() && static_cast<int>(b0.size()) < m.size()) ell = c;
    }
    out.node.coordinate = ell;

    const auto sp = split(m, ell);
    const auto b0_idx = block_indices(m, ell, 0);
    const auto b1_idx = block_indices(m, ell, 1);

    Coupling kappa;
    try {
        kappa = flip_swap_coupling(m, ell);
    } catch (const InfeasibleError& e) {
        checks.push_back({path, std::string("block coupling exists at coordinate ") +
                                    std::to_string(ell) + ": " + e.what(),
                          0.0, 1.0, false});
        out.ok = false;
        out.node.claimed = 0;
        out.claimed = T{};
        return out;
    }

    const auto& weights = weights_as<T>(m);
    const auto& rates = rates_as<T>(g);
    const auto pibar = split_pibar<T>(sp);

    // projection rates across the cut
    T flux01{}, flux10{};
    for (size_t ii = 0; ii < b0_idx.size(); ++ii)
        for (size_t jj = 0; jj < b1_idx.size(); ++jj) {
            const int x = b0_idx[ii], y = b1_idx[jj];
            flux01 += weights[static_cast<size_t>(x)] * rates(x, y);
            flux10 += weights[static_cast<size_t>(y)] * rates(y, x);
        }
    const T a = flux01 / pibar[0];
    const T b = flux10 / pibar[1];

    // coupling quality at this node
    const auto& mass = mass_as<T>(kappa);
    bool chi_any = false;
    T chi_val{};
    if (a > 0) {
        for (size_t ii = 0; ii < b0_idx.size(); ++ii)
            for (size_t jj = 0; jj < b1_idx.size(); ++jj) {
                const T& k = mass(static_cast<int>(ii), static_cast<int>(jj));
                if (!(k > 0)) continue;
                const int x = b0_idx[ii], y = b1_idx[jj];
                const T num = weights[static_cast<size_t>(x)] * rates(x, y);
                const T den = pibar[0] * a * k;
                const T ratio = num / den;
                if (!chi_any || ratio < chi_val) chi_val = ratio;
                chi_any = true;
            }
    }

    const ChainStats st = validate(g);
    const T two_state_floor = target == Target::Rho ? min_v(a, b) : a + b;
    const T node_bound = chi_any ? T(chi_val * two_state_floor) : T{};
    const T rhs = target == Target::Rho ? stat_m<T>(st) : stat_M<T>(st);

    const bool pass = bound_holds(node_bound, rhs);
    checks.push_back({path,
                      target == Target::Rho ? "chi * min(a, b) >= m" : "chi * (a + b) >= M",
                      as_double(node_bound), as_double(rhs), pass});
    out.ok = pass;

    out.node.pibar = {as_double(pibar[0]), as_double(pibar[1])};
    out.node.a = as_double(a);
    out.node.b = as_double(b);
    out.node.chi = chi_any ? as_double(chi_val) : kInf;
    out.node.m = st.m;
    out.node.M = st.M;
    out.node.floor_value = as_double(two_state_floor);
    out.node.node_bound = as_double(node_bound);

    Generator g0 = make_restriction(g, sp.block0, b0_idx);
    Generator g1 = make_restriction(g, sp.block1, b1_idx);
    auto c0 = certify_node<T>(g0, target, opts, path + ".0", checks);
    auto c1 = certify_node<T>(g1, target, opts, path + ".1", checks);
    out.ok = out.ok && c0.ok && c1.ok;

    out.claimed = node_bound;
    if (c0.claimed && *c0.claimed < *out.claimed) out.claimed = c0.claimed;
    if (c1.claimed && *c1.claimed < *out.claimed) out.claimed = c1.claimed;
    out.node.claimed = as_double(*out.claimed);
    out.node.children.push_back(std::move(c0.node));
    out.node.children.push_back(std::move(c1.node));
    return out;
}

template <class T>
Certificate certify_impl(const Generator& g, Target target, const CertifyOptions& opts) {
    Certificate cert;
    cert.target = target;
    cert.exact = g.is_exact();

    if (g.measure().size() == 1) {
        cert.root.path = "root";
        cert.root.leaf = true;
        cert.root.state = g.measure().state(0).to_string();
        cert.root.claimed = kInf;
        cert.valid = true;
        cert.vacuous = true;
        cert.claimed_route = "vacuous";
        return cert;
    }

    const ChainStats st = validate(g);
    auto outcome = certify_node<T>(g, target, opts, "root", cert.checks);
    cert.root = std::move(outcome.node);
    cert.valid = outcome.ok;

    const T m_val = stat_m<T>(st);
    const T M_val = stat_M<T>(st);
    T direct{}, claimed{};
    switch (target) {
        case Target::Lambda: {
            direct = M_val;
            const T up = T(2) * m_val;
            claimed = max_v(M_val, up);
            cert.claimed_route = up > M_val ? "hierarchy" : "direct";
            break;
        }
        case Target::Alpha: {
            direct = M_val;
            const T up = T(4) * m_val;
            claimed = max_v(M_val, up);
            cert.claimed_route = up > M_val ? "hierarchy" : "direct";
            break;
        }
        case Target::Rho:
            direct = m_val;
            claimed = m_val;
            cert.claimed_route = "direct";
            break;
    }
    cert.direct_bound = as_double(direct);
    cert.claimed_bound = as_double(claimed);
    if constexpr (std::is_same_v<T, Rational>) {
        cert.direct_bound_exact = direct;
        cert.claimed_bound_exact = claimed;
    }
    cert.vacuous = !(cert.claimed_bound > 0);

    // the conclusion of the recursion must dominate the direct bound
    if (outcome.claimed && outcome.ok) {
        const bool pass = bound_holds(*outcome.claimed, direct);
        cert.checks.push_back({"root", "recursive bound covers the direct bound",
                               as_double(*outcome.claimed), as_double(direct), pass});
        cert.valid = cert.valid && pass;
    }
    return cert;
}

} // namespace

Certificate certify_main(const Generator& g, Target target, const CertifyOptions& opts) {
    const auto& st = g.measure();
    if (st.size() > 1) {
        const ChainStats stats = validate(g);
        if (stats.pairs_vacuous)
            throw DomainError("the support has no flip or swap pairs; no decomposition applies");
    }
    if (g.is_exact()) return certify_impl<Rational>(g, target, opts);
    return certify_impl<double>(g, target, opts);
}

// ---- walk synthesis --------------------------------------------------------------

namespace {

template <class T>
struct SynthNode {
    Matrix<T> rates;
    T delta{};
};

std::vector<int> nonconstant_coords(const BooleanMeasure& m) {
    std::vector<int> coords;
    for (int c = 1; c <= m.dim(); ++c) {
        const int first = m.state(0).get(c);
        for (int i = 1; i < m.size(); ++i)
            if (m.state(i).get(c) != first) {
                coords.push_back(c);
                break;
            }
    }
    return coords;
}

std::string measure_key(const BooleanMeasure& m) {
    std::ostringstream os;
    os << m.dim();
    for (int i = 0; i < m.size(); ++i)
        os << ";" << m.state(i).to_string() << "=" << format_rational(m.exact_weight(i));
    return os.str();
}

template <class T>
SynthNode<T> synth_average(const BooleanMeasure& m, const std::string& path,
                           std::vector<SynthesisAudit>& audits,
                           std::map<std::string, SynthNode<T>>* memo);

// the walk for one split coordinate: recursive blocks inside, coupling-driven
// rates across
template <class T>
SynthNode<T> synth_coordinate(const BooleanMeasure& m, int ell, const std::string& path,
                              std::vector<SynthesisAudit>& audits,
                              std::map<std::string, SynthNode<T>>* memo) {
    const int s = m.size();
    const auto sp = split(m, ell);
    const auto b0_idx = block_indices(m, ell, 0);
    const auto b1_idx = block_indices(m, ell, 1);
    const Coupling kappa = flip_swap_coupling(m, ell);
    const auto pibar = split_pibar<T>(sp);
    const auto& weights = weights_as<T>(m);
    const auto& mass = mass_as<T>(kappa);

    const std::string here = path + "[l=" + std::to_string(ell) + "]";
    SynthNode<T> rec0 = synth_average<T>(sp.block0, here + ".0", audits, memo);
    SynthNode<T> rec1 = synth_average<T>(sp.block1, here + ".1", audits, memo);

    Matrix<T> q(s, s);
    for (size_t ii = 0; ii < b0_idx.size(); ++ii)
        for (size_t jj = 0; jj < b0_idx.size(); ++jj)
            if (ii != jj)
                q(b0_idx[ii], b0_idx[jj]) = rec0.rates(static_cast<int>(ii), static_cast<int>(jj));
    for (size_t ii = 0; ii < b1_idx.size(); ++ii)
        for (size_t jj = 0; jj < b1_idx.size(); ++jj)
            if (ii != jj)
                q(b1_idx[ii], b1_idx[jj]) = rec1.rates(static_cast<int>(ii), static_cast<int>(jj));

    const T cross_scale = pibar[0] * pibar[1];
    for (size_t ii = 0; ii < b0_idx.size(); ++ii)
        for (size_t jj = 0; jj < b1_idx.size(); ++jj) {
            const T& k = mass(static_cast<int>(ii), static_cast<int>(jj));
            if (!(k > 0)) continue;
            const int x = b0_idx[ii], y = b1_idx[jj];
            q(x, y) = cross_scale * k / weights[static_cast<size_t>(x)];
            q(y, x) = cross_scale * k / weights[static_cast<size_t>(y)];
        }
    for (int i = 0; i < s; ++i) {
        T row{};
        for (int j = 0; j < s; ++j)
            if (i != j) row += q(i, j);
        q(i, i) = -row;
    }

    // audit: projection rates, coupling quality, cross-marginal and diagonal bounds
    SynthesisAudit audit;
    audit.path = here;
    audit.coordinate = ell;
    audit.pibar = {as_double(pibar[0]), as_double(pibar[1])};

    T flux01{}, flux10{};
    double worst_marginal = 0;
    bool diag_ok = true;
    for (size_t ii = 0; ii < b0_idx.size(); ++ii) {
        const int x = b0_idx[ii];
        T row{};
        for (size_t jj = 0; jj < b1_idx.size(); ++jj) row += q(x, b1_idx[jj]);
        flux01 += weights[static_cast<size_t>(x)] * row;
        worst_marginal = std::max(
            worst_marginal, std::abs(as_double(row) - as_double(pibar[1])) / as_double(pibar[1]));
        const T neg_diag = -q(x, x);
        const T cap = rec0.delta + pibar[1];
        if constexpr (std::is_same_v<T, Rational>) {
            if (neg_diag > cap) diag_ok = false;
        } else {
            if (neg_diag > cap + 1e-12) diag_ok = false;
        }
    }
    for (size_t jj = 0; jj < b1_idx.size(); ++jj) {
        const int y = b1_idx[jj];
        T row{};
        for (size_t ii = 0; ii < b0_idx.size(); ++ii) row += q(y, b0_idx[ii]);
        flux10 += weights[static_cast<size_t>(y)] * row;
        worst_marginal = std::max(
            worst_marginal, std::abs(as_double(row) - as_double(pibar[0])) / as_double(pibar[0]));
        const T neg_diag = -q(y, y);
        const T cap = rec1.delta + pibar[0];
        if constexpr (std::is_same_v<T, Rational>) {
            if (neg_diag > cap) diag_ok = false;
        } else {
            if (neg_diag > cap + 1e-12) diag_ok = false;
        }
    }
    const T a = flux01 / pibar[0];
    const T b = flux10 / pibar[1];
    audit.qbar01 = as_double(a);
    audit.qbar10 = as_double(b);
    audit.marginal_residual = worst_marginal;
    audit.diag_ok = diag_ok;

    bool chi_any = false;
    T chi_val{}, crude_best{};
    for (size_t ii = 0; ii < b0_idx.size(); ++ii)
        for (size_t jj = 0; jj < b1_idx.size(); ++jj) {
            const T& k = mass(static_cast<int>(ii), static_cast<int>(jj));
            if (!(k > 0)) continue;
            const int x = b0_idx[ii], y = b1_idx[jj];
            const T num = weights[static_cast<size_t>(x)] * q(x, y);
            const T den = pibar[0] * a * k;
            const T ratio = num / den;
            const T c1 = q(x, y) / a;
            const T c2 = q(y, x) / b;
            const T crude = max_v(c1, c2);
            if (!chi_any || ratio < chi_val) chi_val = ratio;
            if (!chi_any || crude > crude_best) crude_best = crude;
            chi_any = true;
        }
    audit.chi = chi_any ? as_double(chi_val) : kInf;
    audit.crude_max = chi_any ? as_double(crude_best) : 0.0;
    audits.push_back(std::move(audit));

    SynthNode<T> out;
    out.rates = std::move(q);
    for (int i = 0; i < s; ++i) {
        const T nd = -out.rates(i, i);
        if (nd > out.delta) out.delta = nd;
    }
    return out;
}

template <class T>
SynthNode<T> synth_average(const BooleanMeasure& m, const std::string& path,
                           std::vector<SynthesisAudit>& audits,
                           std::map<std::string, SynthNode<T>>* memo) {
    const int s = m.size();
    if (s == 1) {
        SynthNode<T> out;
        out.rates = Matrix<T>(1, 1);
        return out;
    }
    std::string key;
    if (memo) {
        key = measure_key(m);
        auto it = memo->find(key);
        if (it != memo->end()) return it->second;
    }

    const auto coords = nonconstant_coords(m);
    Matrix<T> acc(s, s);
    for (int ell : coords) {
        const SynthNode<T> one = synth_coordinate<T>(m, ell, path, audits, memo);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) acc(i, j) += one.rates(i, j);
    }
    const T scale = T(1) / T(static_cast<int>(coords.size()));
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) acc(i, j) *= scale;

    SynthNode<T> out;
    out.rates = std::move(acc);
    for (int i = 0; i < s; ++i) {
        const T nd = -out.rates(i, i);
        if (nd > out.delta) out.delta = nd;
    }
    if (memo) memo->emplace(std::move(key), out);
    return out;
}

template <class T>
Generator wrap_generator(const BooleanMeasure& m, Matrix<T> rates) {
    if constexpr (std::is_same_v<T, Rational>) {
        return Generator::exact(m, std::move(rates));
    } else {
        return Generator::real(m, std::move(rates));
    }
}

template <class T>
SynthesisResult synthesize_impl(const BooleanMeasure& m) {
    SynthesisResult res;
    res.homogeneous = m.homogeneity().has_value();
    res.delta_bound = res.homogeneous ? 2.0 * *m.homogeneity() : static_cast<double>(m.dim());

    std::map<std::string, SynthNode<T>> memo_store;
    std::map<std::string, SynthNode<T>>* memo =
        std::is_same_v<T, Rational> ? &memo_store : nullptr;

    if (m.size() == 1) {
        res.averaged = wrap_generator<T>(m, Matrix<T>(1, 1));
        res.delta = 0;
        return res;
    }

    const auto coords = nonconstant_coords(m);
    const int s = m.size();
    Matrix<T> acc(s, s);
    for (int ell : coords) {
        SynthNode<T> one = synth_coordinate<T>(m, ell, "root", res.audits, memo);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) acc(i, j) += one.rates(i, j);
        res.per_coordinate.emplace(ell, wrap_generator<T>(m, std::move(one.rates)));
    }
    const T scale = T(1) / T(static_cast<int>(coords.size()));
    T delta{};
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) acc(i, j) *= scale;
        const T nd = -acc(i, i);
        if (nd > delta) delta = nd;
    }
    res.delta = as_double(delta);
    res.averaged = wrap_generator<T>(m, std::move(acc));
    res.normalized = normalize(res.averaged);
    return res;
}

} // namespace

SynthesisResult synthesize_flip_swap(const BooleanMeasure& m) {
    if (m.is_exact()) return synthesize_impl<Rational>(m);
    return synthesize_impl<double>(m);
}

} // namespace coverwalk
