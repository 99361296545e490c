#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coverwalk/coupling.hpp"
#include "coverwalk/measure.hpp"

namespace coverwalk {

/// Result of trying to couple mu over nu along the covering relation.
struct CoverAttempt {
    std::optional<Coupling> coupling;
    /// Present when no coupling exists: which event blocks it.
    std::string obstruction;
};

/// Couple (U, V) with U ~ mu, V ~ nu and U covering V pointwise, when
/// possible. Decided by transportation feasibility; the returned coupling is
/// the deterministic one produced by index-ordered augmentation.
CoverAttempt try_cover_coupling(const BooleanMeasure& mu, const BooleanMeasure& nu);

/// As above, discarding the obstruction report.
std::optional<Coupling> stochastic_cover_coupling(const BooleanMeasure& mu,
                                                  const BooleanMeasure& nu);

enum class ScpMode { Full, Sampled };

struct ScpOptions {
    ScpMode mode = ScpMode::Full;
    int full_ceiling = 10;     // refuse full enumeration above this dimension
    std::uint64_t seed = 0;    // sampled mode
    long samples = 10000;      // sampled mode target count
    bool store_couplings = false;
};

struct ScpWitness {
    std::vector<int> S;  // 1-based coordinates, increasing
    std::string x, y;    // assignments on S in coordinate order, x covers y
    std::string obstruction;
};

struct SCPReport {
    bool holds = true;
    std::string mode;
    long checked_triples = 0;
    std::optional<std::uint64_t> seed; // sampled mode only
    std::optional<ScpWitness> witness;
    struct StoredCoupling {
        std::vector<int> S;
        std::string x, y;
        Coupling coupling;
    };
    std::vector<StoredCoupling> couplings; // only when store_couplings
};

/// Verify the stochastic covering property: for every S and every pair of
/// S-configurations x covering y (both of positive probability), the law of
/// the remaining coordinates given y must cover the law given x. Full mode
/// enumerates, ascending in (S, y, raised coordinate), and stops at the first
/// failure; sampled mode draws triples at random from the same family.
SCPReport check_scp(const BooleanMeasure& m, const ScpOptions& opts = {});

/// The lemma coupling at a split coordinate: a coupling of the two block
/// conditionals (full states) supported on flip/swap pairs, built by cover-
/// coupling the conditional laws of the coordinates away from l and
/// re-attaching coordinate l. Throws InfeasibleError when the measure is not
/// SCP at l, DomainError when a block is empty.
Coupling flip_swap_coupling(const BooleanMeasure& m, int l);

} // namespace coverwalk
