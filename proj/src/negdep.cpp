#include "coverwalk/negdep.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "coverwalk/flow.hpp"

namespace coverwalk {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string state_list(const std::vector<BitVector>& support, const std::vector<int>& idx) {
    std::ostringstream os;
    os << "{";
    for (size_t k = 0; k < idx.size(); ++k) {
        if (k) os << ", ";
        os << support[static_cast<size_t>(idx[k])].to_string();
    }
    os << "}";
    return os.str();
}

template <class T>
CoverAttempt cover_attempt_lane(const BooleanMeasure& mu, const BooleanMeasure& nu) {
    const auto& wl = weights_as<T>(mu);
    const auto& wr = weights_as<T>(nu);
    auto admissible = [&](int i, int j) { return covers(mu.state(i), nu.state(j)); };
    auto res = transport<T>(wl, wr, admissible);
    CoverAttempt out;
    if (res.feasible) {
        if constexpr (std::is_same_v<T, Rational>)
            out.coupling = Coupling::exact(mu.support(), nu.support(), std::move(res.plan),
                                           Relation::Cover);
        else
            out.coupling = Coupling::real(mu.support(), nu.support(), std::move(res.plan),
                                          Relation::Cover);
        return out;
    }
    double va = 0, vb = 0;
    for (int i : res.violator_left) va += mu.weight(i);
    for (int j : res.neighborhood_right) vb += nu.weight(j);
    std::ostringstream os;
    os << "states " << state_list(mu.support(), res.violator_left) << " carry mass " << fmt(va)
       << " on the left, but the states they can cover, "
       << state_list(nu.support(), res.neighborhood_right) << ", carry only mass " << fmt(vb)
       << " on the right";
    out.obstruction = os.str();
    return out;
}

} // namespace

CoverAttempt try_cover_coupling(const BooleanMeasure& mu, const BooleanMeasure& nu) {
    if (mu.dim() != nu.dim())
        throw InputError("cover coupling needs equal dimensions, got " +
                         std::to_string(mu.dim()) + " and " + std::to_string(nu.dim()));
    if (mu.is_exact() && nu.is_exact()) return cover_attempt_lane<Rational>(mu, nu);
    return cover_attempt_lane<double>(mu, nu);
}

std::optional<Coupling> stochastic_cover_coupling(const BooleanMeasure& mu,
                                                  const BooleanMeasure& nu) {
    return try_cover_coupling(mu, nu).coupling;
}

namespace {

// mass of the event {X_S = cfg} where cfg is a full-width mask restricted to S
double event_mass(const BooleanMeasure& m, std::uint32_t s_mask, std::uint32_t cfg) {
    double total = 0;
    for (int i = 0; i < m.size(); ++i)
        if ((m.state(i).mask() & s_mask) == cfg) total += m.weight(i);
    return total;
}

std::map<int, int> assignment_of(int n, std::uint32_t s_mask, std::uint32_t cfg) {
    std::map<int, int> a;
    for (int c = 1; c <= n; ++c)
        if ((s_mask >> (c - 1)) & 1u) a[c] = static_cast<int>((cfg >> (c - 1)) & 1u);
    return a;
}

std::vector<int> coords_of(int n, std::uint32_t s_mask) {
    std::vector<int> out;
    for (int c = 1; c <= n; ++c)
        if ((s_mask >> (c - 1)) & 1u) out.push_back(c);
    return out;
}

std::string config_string(std::uint32_t s_mask, std::uint32_t cfg, int n) {
    std::string s;
    for (int c = 1; c <= n; ++c)
        if ((s_mask >> (c - 1)) & 1u) s += ((cfg >> (c - 1)) & 1u) ? '1' : '0';
    return s;
}

struct TripleOutcome {
    bool ok;
    std::string obstruction;
};

TripleOutcome test_triple(const BooleanMeasure& m, std::uint32_t s_mask, std::uint32_t lower,
                          std::uint32_t upper, std::vector<SCPReport::StoredCoupling>* store,
                          int n) {
    auto cond_lower = condition(m, assignment_of(n, s_mask, lower));
    auto cond_upper = condition(m, assignment_of(n, s_mask, upper));
    auto attempt = try_cover_coupling(cond_lower.measure, cond_upper.measure);
    if (!attempt.coupling) return {false, attempt.obstruction};
    if (store)
        store->push_back({coords_of(n, s_mask), config_string(s_mask, upper, n),
                          config_string(s_mask, lower, n), *attempt.coupling});
    return {true, {}};
}

ScpWitness make_witness(const BooleanMeasure& m, std::uint32_t s_mask, std::uint32_t lower,
                        std::uint32_t upper, const std::string& obstruction) {
    ScpWitness w;
    const int n = m.dim();
    w.S = coords_of(n, s_mask);
    w.x = config_string(s_mask, upper, n);
    w.y = config_string(s_mask, lower, n);
    w.obstruction = "the law of the remaining coordinates given X_S=" + w.y +
                    " does not cover the law given X_S=" + w.x + ": " + obstruction;
    return w;
}

SCPReport check_scp_full(const BooleanMeasure& m, const ScpOptions& opts) {
    const int n = m.dim();
    if (n > opts.full_ceiling)
        throw DomainError("full enumeration refused for n=" + std::to_string(n) +
                          " > ceiling " + std::to_string(opts.full_ceiling) +
                          "; use sampled mode");
    SCPReport report;
    report.mode = "full";
    const std::uint32_t full = (n >= 32) ? ~0u : ((1u << n) - 1u);
    auto* store = opts.store_couplings ? &report.couplings : nullptr;
    for (std::uint32_t s_mask = 1; s_mask < full; ++s_mask) {
        for (std::uint32_t lower = 0; lower <= full; ++lower) {
            if ((lower & s_mask) != lower) continue;
            if (!(event_mass(m, s_mask, lower) > 0)) continue;
            for (int bit = 0; bit < n; ++bit) {
                const std::uint32_t b = 1u << bit;
                if (!(s_mask & b) || (lower & b)) continue;
                const std::uint32_t upper = lower | b;
                if (!(event_mass(m, s_mask, upper) > 0)) continue;
                ++report.checked_triples;
                auto outcome = test_triple(m, s_mask, lower, upper, store, n);
                if (!outcome.ok) {
                    report.holds = false;
                    report.witness = make_witness(m, s_mask, lower, upper, outcome.obstruction);
                    return report;
                }
            }
        }
    }
    return report;
}

SCPReport check_scp_sampled(const BooleanMeasure& m, const ScpOptions& opts) {
    const int n = m.dim();
    SCPReport report;
    report.mode = "sampled";
    report.seed = opts.seed;
    if (n < 2) return report; // no S with a free remainder and a raisable bit
    std::mt19937_64 rng(opts.seed);
    auto uniform01 = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const std::uint32_t full = (1u << n) - 1u;
    auto* store = opts.store_couplings ? &report.couplings : nullptr;

    const long max_attempts = 200 * opts.samples;
    long attempts = 0;
    while (report.checked_triples < opts.samples && attempts < max_attempts) {
        ++attempts;
        // z ~ pi guarantees the lower event has positive probability
        double u = uniform01();
        double acc = 0;
        int zi = m.size() - 1;
        for (int i = 0; i < m.size(); ++i) {
            acc += m.weight(i);
            if (u < acc) {
                zi = i;
                break;
            }
        }
        const std::uint32_t z = m.state(zi).mask();
        const std::uint32_t s_mask = static_cast<std::uint32_t>(rng()) & full;
        if (s_mask == 0 || s_mask == full) continue;
        const std::uint32_t lower = z & s_mask;
        std::vector<int> raisable;
        for (int bit = 0; bit < n; ++bit)
            if ((s_mask & (1u << bit)) && !(lower & (1u << bit))) raisable.push_back(bit);
        if (raisable.empty()) continue;
        const int bit = raisable[static_cast<size_t>(rng() % raisable.size())];
        const std::uint32_t upper = lower | (1u << bit);
        if (!(event_mass(m, s_mask, upper) > 0)) continue;
        ++report.checked_triples;
        auto outcome = test_triple(m, s_mask, lower, upper, store, n);
        if (!outcome.ok) {
            report.holds = false;
            report.witness = make_witness(m, s_mask, lower, upper, outcome.obstruction);
            return report;
        }
    }
    return report;
}

} // namespace

SCPReport check_scp(const BooleanMeasure& m, const ScpOptions& opts) {
    if (m.dim() < 2) {
        // no proper S leaves both a configuration pair and a remainder
        SCPReport report;
        report.mode = opts.mode == ScpMode::Full ? "full" : "sampled";
        if (opts.mode == ScpMode::Sampled) report.seed = opts.seed;
        return report;
    }
    return opts.mode == ScpMode::Full ? check_scp_full(m, opts) : check_scp_sampled(m, opts);
}

Coupling flip_swap_coupling(const BooleanMeasure& m, int l) {
    auto blocks = split(m, l); // throws DomainError when a block is empty
    if (m.dim() == 1) {
        // no other coordinates: the blocks are the two singletons of a flip pair
        if (m.is_exact()) {
            Matrix<Rational> one(1, 1, Rational(1));
            return Coupling::exact(blocks.block0.support(), blocks.block1.support(),
                                   std::move(one), Relation::FlipSwap);
        }
        Matrix<double> one(1, 1, 1.0);
        return Coupling::real(blocks.block0.support(), blocks.block1.support(),
                              std::move(one), Relation::FlipSwap);
    }
    auto cond0 = condition(m, {{l, 0}});
    auto cond1 = condition(m, {{l, 1}});
    auto attempt = try_cover_coupling(cond0.measure, cond1.measure);
    if (!attempt.coupling)
        throw InfeasibleError("measure fails the covering property at coordinate " +
                              std::to_string(l) + ": " + attempt.obstruction);
    // conditional supports map monotonically onto the block supports, so the
    // transport plan is already aligned with them
    const auto& plan = *attempt.coupling;
    if (plan.is_exact())
        return Coupling::exact(blocks.block0.support(), blocks.block1.support(),
                               plan.exact_mass_matrix(), Relation::FlipSwap);
    return Coupling::real(blocks.block0.support(), blocks.block1.support(),
                          plan.mass_matrix(), Relation::FlipSwap);
}

} // namespace coverwalk
