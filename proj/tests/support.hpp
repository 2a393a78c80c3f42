#pragma once

// Shared test helpers: deterministic generators and small brute-force oracles
// that the library code must agree with. Everything here is written against
// the definitions directly (enumeration, minors, Laplace determinants) and on
// purpose shares no algorithmic structure with the library implementations.

#include "ellipt/graph.hpp"
#include "ellipt/matrix.hpp"
#include "ellipt/rational.hpp"
#include "ellipt/rotation.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testsupport {

using ellipt::BigInt;
using ellipt::Rational;
using ellipt::RationalRotation;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Rational random_rational(std::mt19937_64& rng, int max_num, int max_den) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng), den(rng));
}

// Rational point on the unit circle from a Pythagorean parametrization,
// with random quadrant.
inline RationalRotation random_rotation(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(1, 40);
    int m = pick(rng), k = pick(rng);
    if (m == k) ++m;
    const Rational d(static_cast<long>(m) * m + static_cast<long>(k) * k);
    Rational c = Rational(static_cast<long>(m) * m - static_cast<long>(k) * k) / d;
    Rational s = Rational(2L * m * k) / d;
    if (rng() & 1) c = -c;
    if (rng() & 1) s = -s;
    return RationalRotation(c, s);
}

inline std::vector<std::vector<Rational>> to_rows(const ellipt::SymmetricMatrix& m) {
    std::vector<std::vector<Rational>> rows(m.size(), std::vector<Rational>(m.size()));
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) rows[i][j] = m.at(i, j);
    return rows;
}

inline Rational det_laplace(const std::vector<std::vector<Rational>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 1) return a[0][0];
    Rational acc(0);
    int sign = 1;
    for (int c = 0; c < n; ++c) {
        std::vector<std::vector<Rational>> sub(n - 1, std::vector<Rational>(n - 1));
        for (int i = 1; i < n; ++i) {
            int jj = 0;
            for (int j = 0; j < n; ++j) {
                if (j == c) continue;
                sub[i - 1][jj++] = a[i][j];
            }
        }
        if (a[0][c] != 0) acc += Rational(sign) * a[0][c] * det_laplace(sub);
        sign = -sign;
    }
    return acc;
}

// PSD oracle by definition for small n: every principal minor is nonnegative.
inline bool psd_by_principal_minors(const ellipt::SymmetricMatrix& m) {
    const int n = m.size();
    const auto rows = to_rows(m);
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        std::vector<std::vector<Rational>> sub(idx.size(), std::vector<Rational>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) sub[i][j] = rows[idx[i]][idx[j]];
        if (det_laplace(sub) < 0) return false;
    }
    return true;
}

// Rank oracle: largest r such that some r x r minor is nonzero.
inline int rank_by_minors(const ellipt::SymmetricMatrix& m) {
    const int n = m.size();
    const auto rows = to_rows(m);
    std::vector<std::vector<int>> subsets;
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) idx.push_back(i);
        subsets.push_back(idx);
    }
    int best = 0;
    for (const auto& ri : subsets)
        for (const auto& ci : subsets) {
            if (ri.size() != ci.size() || static_cast<int>(ri.size()) <= best) continue;
            std::vector<std::vector<Rational>> sub(ri.size(), std::vector<Rational>(ci.size()));
            for (std::size_t i = 0; i < ri.size(); ++i)
                for (std::size_t j = 0; j < ci.size(); ++j) sub[i][j] = rows[ri[i]][ci[j]];
            if (det_laplace(sub) != 0) best = static_cast<int>(ri.size());
        }
    return best;
}

// Subset-sum oracle: can the multiset be split into two halves of equal sum?
// Dynamic program over reachable signed sums, independent of any decider.
inline bool oracle_partitionable(const std::vector<long>& a) {
    long total = 0;
    for (long v : a) total += v;
    if (total % 2 != 0) return false;
    std::vector<char> reach(static_cast<std::size_t>(total) + 1, 0);
    reach[0] = 1;
    for (long v : a)
        for (long s = total; s >= v; --s)
            if (reach[static_cast<std::size_t>(s - v)]) reach[static_cast<std::size_t>(s)] = 1;
    return reach[static_cast<std::size_t>(total / 2)] != 0;
}

// K4-minor oracle by definition: four disjoint nonempty connected branch sets,
// pairwise joined by an edge. Only meant for small n.
inline bool oracle_has_k4_minor(const ellipt::Graph& g) {
    const int n = g.node_count();
    std::vector<int> part(n, 0);
    const auto connected_class = [&](int cls) {
        std::vector<int> nodes;
        for (int i = 0; i < n; ++i)
            if (part[i] == cls) nodes.push_back(i);
        if (nodes.empty()) return false;
        std::vector<char> seen(n, 0);
        std::vector<int> stack{nodes[0]};
        seen[nodes[0]] = 1;
        int cnt = 0;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            ++cnt;
            for (int v : g.neighbors(u))
                if (part[v] == cls && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        return cnt == static_cast<int>(nodes.size());
    };
    const auto classes_joined = [&](int c1, int c2) {
        for (const auto& [u, v] : g.edges())
            if ((part[u] == c1 && part[v] == c2) || (part[u] == c2 && part[v] == c1)) return true;
        return false;
    };
    // part[i] in {0 = unused, 1..4}
    std::vector<int> radix(n, 0);
    for (;;) {
        for (int i = 0; i < n; ++i) part[i] = radix[i];
        bool ok = true;
        for (int c = 1; c <= 4 && ok; ++c) ok = connected_class(c);
        for (int c1 = 1; c1 <= 4 && ok; ++c1)
            for (int c2 = c1 + 1; c2 <= 4 && ok; ++c2) ok = classes_joined(c1, c2);
        if (ok) return true;
        int i = 0;
        while (i < n && radix[i] == 4) radix[i++] = 0;
        if (i == n) return false;
        ++radix[i];
    }
}

// Connected Erdos-Renyi-ish graph: random edge set, resampled until connected.
inline ellipt::Graph random_connected_graph(std::mt19937_64& rng, int n, double p) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (;;) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (coin(rng) < p) edges.emplace_back(u, v);
        ellipt::Graph g(n, edges);
        if (g.component_count() == 1) return g;
    }
}

} // namespace testsupport
