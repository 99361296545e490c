#pragma once

#include <functional>
#include <vector>

#include "coverwalk/matrix.hpp"
#include "coverwalk/rational.hpp"

namespace coverwalk {

/// Outcome of a transportation feasibility problem: couple marginals mu and
/// nu using only admissible (left, right) pairs.
template <class T>
struct TransportResult {
    bool feasible = false;
    Matrix<T> plan; // left x right; meaningful when feasible
    /// Witness of infeasibility (Hall violator): a left set whose mass
    /// exceeds the total nu-mass of its admissible right neighborhood.
    T deficit = T(0);
    std::vector<int> violator_left;
    std::vector<int> neighborhood_right;
};

template <class T>
struct FlowTraits;

template <>
struct FlowTraits<Rational> {
    static bool positive(const Rational& x) { return x > 0; }
    static bool gap_ok(const Rational& gap) { return gap == 0; }
};

template <>
struct FlowTraits<double> {
    static bool positive(double x) { return x > 1e-15; }
    static bool gap_ok(double gap) { return gap <= 1e-10; }
};

/// Max-flow feasibility on the bipartite admissibility graph: source->left at
/// capacity mu(x), right->sink at capacity nu(y), admissible pairs unbounded.
/// Feasible iff the max flow carries the whole mass. Augmenting paths are
/// found by breadth-first search in fixed index order, so the returned plan
/// is deterministic. Exact arithmetic for rationals; doubles use a 1e-10
/// feasibility gap and treat sub-1e-15 residuals as empty.
template <class T>
TransportResult<T> transport(const std::vector<T>& mu, const std::vector<T>& nu,
                             const std::function<bool(int, int)>& admissible) {
    using Traits = FlowTraits<T>;
    const int L = static_cast<int>(mu.size());
    const int R = static_cast<int>(nu.size());
    const int source = 0;
    const int sink = L + R + 1;
    const int N = L + R + 2;

    T total(0);
    for (const auto& w : mu) total += w;
    T inf = total + T(1);

    Matrix<T> res(N, N, T(0));
    for (int i = 0; i < L; ++i) res(source, 1 + i) = mu[static_cast<size_t>(i)];
    for (int j = 0; j < R; ++j) res(1 + L + j, sink) = nu[static_cast<size_t>(j)];
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < R; ++j)
            if (admissible(i, j)) res(1 + i, 1 + L + j) = inf;

    std::vector<int> parent(static_cast<size_t>(N));
    std::vector<int> queue(static_cast<size_t>(N));
    auto bfs = [&]() -> bool {
        std::fill(parent.begin(), parent.end(), -1);
        parent[source] = source;
        int head = 0, tail = 0;
        queue[tail++] = source;
        while (head < tail) {
            const int u = queue[head++];
            for (int v = 0; v < N; ++v) {
                if (parent[static_cast<size_t>(v)] != -1) continue;
                if (!Traits::positive(res(u, v))) continue;
                parent[static_cast<size_t>(v)] = u;
                if (v == sink) return true;
                queue[tail++] = v;
            }
        }
        return false;
    };

    T flow(0);
    while (bfs()) {
        T bottleneck = inf;
        for (int v = sink; v != source; v = parent[static_cast<size_t>(v)]) {
            const int u = parent[static_cast<size_t>(v)];
            if (res(u, v) < bottleneck) bottleneck = res(u, v);
        }
        for (int v = sink; v != source; v = parent[static_cast<size_t>(v)]) {
            const int u = parent[static_cast<size_t>(v)];
            res(u, v) -= bottleneck;
            res(v, u) += bottleneck;
        }
        flow += bottleneck;
    }

    TransportResult<T> out;
    const T gap = total - flow;
    out.feasible = Traits::gap_ok(gap);
    if (out.feasible) {
        out.plan = Matrix<T>(L, R, T(0));
        // the reverse residual of an admissible edge accumulates its net flow
        for (int i = 0; i < L; ++i)
            for (int j = 0; j < R; ++j)
                if (admissible(i, j)) out.plan(i, j) = res(1 + L + j, 1 + i);
        return out;
    }
    out.deficit = gap;
    // source side of the min cut is a Hall violator
    std::vector<bool> reach(static_cast<size_t>(N), false);
    reach[source] = true;
    int head = 0, tail = 0;
    queue[tail++] = source;
    while (head < tail) {
        const int u = queue[head++];
        for (int v = 0; v < N; ++v)
            if (!reach[static_cast<size_t>(v)] && Traits::positive(res(u, v))) {
                reach[static_cast<size_t>(v)] = true;
                queue[tail++] = v;
            }
    }
    for (int i = 0; i < L; ++i)
        if (reach[static_cast<size_t>(1 + i)]) out.violator_left.push_back(i);
    std::vector<bool> seen(static_cast<size_t>(R), false);
    for (int i : out.violator_left)
        for (int j = 0; j < R; ++j)
            if (!seen[static_cast<size_t>(j)] && admissible(i, j)) {
                seen[static_cast<size_t>(j)] = true;
                out.neighborhood_right.push_back(j);
            }
    return out;
}

} // namespace coverwalk
