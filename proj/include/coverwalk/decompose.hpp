#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coverwalk/chain.hpp"
#include "coverwalk/coupling.hpp"
#include "coverwalk/functional.hpp"
#include "coverwalk/negdep.hpp"

namespace coverwalk {

/// A partition of a chain's support together with the induced projection
/// chain (on block indices) and restriction chains (on blocks). Couplings of
/// block-conditional laws may be attached per ordered block pair; they are
/// required by chi() for every pair the projection rates positively.
///
/// The projection chain lives on the block index set rather than the lattice,
/// so its law and rates are stored as plain arrays; restriction chains are
/// full Generator values on the renormalized block measures.
struct Decomposition {
    Generator chain;
    std::vector<std::vector<int>> blocks; // parent support indices
    std::vector<double> pibar;
    Matrix<double> qbar;
    std::vector<Generator> restrictions;
    std::map<std::pair<int, int>, Coupling> couplings;
    bool exact = false;
    // exact-lane mirrors
    std::vector<Rational> pibar_exact;
    Matrix<Rational> qbar_exact;
};

/// Build the projection and restriction chains of a partition, verifying that
/// the blocks cover the support exactly once and that the projection law is
/// reversible under the projection rates. Couplings start empty.
Decomposition project_restrict(const Generator& g, const std::vector<std::vector<int>>& blocks);

/// Two-block decomposition at a coordinate with the lemma couplings attached
/// in both directions. Throws DomainError when a block is empty and
/// InfeasibleError when the measure fails the covering property there.
Decomposition decompose_at(const Generator& g, int coordinate);

/// One evaluated quadruple of the coupling-quality minimum, with the crude
/// per-pair floor max{Q(x,y)/Qbar(i,j), Q(y,x)/Qbar(j,i)} it must dominate.
struct ChiQuad {
    int block_i = 0, block_j = 0;
    std::string x, y;
    double ratio = 0;
    double crude_floor = 0;
};

/// Quality of the attached couplings: the minimum over quadruples (x, y, i, j)
/// with positive denominator of pi(x)Q(x,y) / (pibar(i)Qbar(i,j)kappa(x,y)).
/// zero flags a vanishing minimum (a partition the recursion must avoid);
/// value is +infinity when no quadruple is evaluable.
struct ChiReport {
    double value = 0;
    bool zero = false;
    std::vector<ChiQuad> quads;
    std::optional<Rational> value_exact;
};

/// Throws DomainError when a positively-rated block pair has no coupling.
ChiReport chi(const Decomposition& d);

/// Residuals of the two decomposition identities at one positive observable,
/// plus the Jensen gaps of the attached couplings.
///
/// dec1_*: relative residual of  R_pi(f) = sum_i pibar(i) R_{pi_i}(f) + R_pibar(fbar).
/// dec2_*: relative residual of  L_pi(f) = sum_i pibar(i) L_{pi_i}(f) + cross,
///         where cross runs over true rates across block pairs.
/// jensen_*: min over coupled pairs of sum kappa(x,y)Psi(f(x),f(y)) - Psi(fbar_i, fbar_j),
///           non-negative up to rounding by convexity of Psi.
struct IdentityReport {
    double dec1_variance = 0;
    double dec1_entropy = 0;
    double dec2_ff = 0;
    double dec2_flogf = 0;
    double dec2_sqrt = 0;
    double jensen_ff = 0;
    double jensen_flogf = 0;
    double jensen_sqrt = 0;
    double max_residual = 0; // over the five identity residuals
};
IdentityReport identity_check(const Decomposition& d, const Observable& f);

enum class Target { Lambda, Alpha, Rho };

std::string target_name(Target t);

struct CertifyOptions {
    bool recheck_scp = false; // re-verify the covering property at every node
};

/// One numeric verification performed at a node of the certificate tree.
struct CertificateCheck {
    std::string node; // path: "root", "root.0", "root.1.0", ...
    std::string what;
    double lhs = 0, rhs = 0;
    bool pass = false;
};

/// Node of the recursive certificate: the split coordinate, the projection
/// two-state data, the coupling quality, this node's flip/swap rate extremes,
/// and the recursive bound min{chi * floor, children}.
struct CertificateNode {
    std::string path;
    bool leaf = false;
    std::string state; // leaf only: the singleton support state
    int coordinate = 0;
    std::array<double, 2> pibar{0, 0};
    double a = 0, b = 0; // projection rates 0->1, 1->0
    double chi = 0;
    double m = 0, M = 0;
    double floor_value = 0; // a+b (lambda, alpha) or min(a,b) (rho)
    double node_bound = 0;  // chi * floor_value
    double claimed = 0;     // min{node_bound, children claimed}; +inf on leaves
    std::vector<CertificateNode> children;
};

/// Certified lower bound on lambda, alpha or rho obtained by replaying the
/// recursive decomposition proof node by node. direct_bound is the extreme
/// the recursion itself supports (M for lambda/alpha, m for rho);
/// claimed_bound adds the hierarchy upgrade (max{M, 2m} / max{M, 4m} / m) and
/// claimed_route records which branch won. On the exact lane every comparison
/// is exact and rational mirrors of the bounds are carried.
struct Certificate {
    Target target = Target::Lambda;
    bool valid = false;
    bool vacuous = false; // singleton support, or a zero claimed bound
    bool exact = false;
    double claimed_bound = 0;
    double direct_bound = 0;
    std::string claimed_route; // "direct" | "hierarchy" | "vacuous"
    std::optional<Rational> claimed_bound_exact, direct_bound_exact;
    CertificateNode root;
    std::vector<CertificateCheck> checks;
};

/// Replay the recursive proof for a covering-property measure and a
/// reversible generator on it: split at the smallest coordinate with two
/// non-empty blocks, attach the lemma coupling, verify chi * (a+b) >= M
/// (lambda/alpha) or chi * min(a,b) >= m (rho) at the node, recurse into both
/// restriction chains. A failed node check or an infeasible coupling yields a
/// certificate with valid = false naming the offending node.
Certificate certify_main(const Generator& g, Target target, const CertifyOptions& opts = {});

/// Per-node audit trail of the synthesis recursion: the projection data of
/// the assembled walk, its coupling quality (identically 1 by construction),
/// the crude floor it dominates, and the residual of the cross-row identity
/// sum_y Q(x, y) = pibar(1 - i) for x in block i.
struct SynthesisAudit {
    std::string path; // "root", "root[l=3].0", ...
    int coordinate = 0;
    std::array<double, 2> pibar{0, 0};
    double qbar01 = 0, qbar10 = 0;
    double chi = 0;
    double crude_max = 0;
    double marginal_residual = 0;
    bool diag_ok = false; // -Q(x,x) <= Delta(block) + pibar(1-i) at every x
};

/// The synthesized flip/swap walk: one generator per non-constant coordinate,
/// their average, and the average normalized by its Delta. The un-normalized
/// average satisfies lambda, alpha >= 1 and Delta <= delta_bound (n in
/// general, 2k for homogeneous measures).
struct SynthesisResult {
    std::map<int, Generator> per_coordinate;
    Generator averaged;
    std::optional<Generator> normalized; // absent for the singleton support
    double delta = 0;
    double delta_bound = 0;
    bool homogeneous = false;
    std::vector<SynthesisAudit> audits;
};

/// Recursively build the walk of the covering-property synthesis: split at
/// each non-constant coordinate, couple the blocks, give cross pairs rate
/// pibar(0)pibar(1)kappa(x,y)/pi(x), synthesize the blocks recursively, and
/// average. Throws InfeasibleError (via the coupling) when the measure lacks
/// the covering property.
SynthesisResult synthesize_flip_swap(const BooleanMeasure& m);

} // namespace coverwalk
