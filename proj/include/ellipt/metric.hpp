#pragma once

#include "ellipt/graph.hpp"
#include "ellipt/values.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace ellipt {

// Which circuit family the cycle inequalities are checked over. Chordless
// circuits plus the edge bounds already cut out the whole polytope; the
// all-circuits mode exists for cross-checks.
enum class CircuitMode { ChordlessOnly, AllUpToLen };

struct MetConfig {
    CircuitMode circuits = CircuitMode::ChordlessOnly;
    int max_len = 0; // 0 means the node count
    std::size_t max_circuits = 100000;
    double tol = 1e-9;
};

struct MetViolation {
    Walk circuit;              // empty for a plain edge-bound violation
    std::vector<int> odd_set;  // edge indices of F (for circuits), or the edge itself
    double violation;          // how far past the inequality the point sits
};

struct MetReport {
    bool member;    // no inequality violated beyond tol
    bool ambiguous; // the binding inequality sits within tol of equality
    std::optional<MetViolation> worst;
};

// For one circuit: the odd edge set F maximizing a(F) - a(C\F) - |F| + 1,
// found in one pass (take every a_e > 1/2, then fix parity by flipping the
// edge with the smallest |2 a_e - 1|). Returns (F, violation value).
std::pair<std::vector<int>, double> worst_odd_set(const Graph& g, const Walk& circuit,
                                                  const AngleVector& a);

// Membership of a in the cycle-inequality polytope of g: 0 <= a_e <= 1 plus
// every odd-set circuit inequality over the configured circuit family.
MetReport check_met(const Graph& g, const AngleVector& a, const MetConfig& cfg = {});

// Membership of the cosine vector x in the edge projection of the unit-
// diagonal PSD cone, valid exactly when g has no K4 minor (throws
// not_k4_minor_free otherwise). Decided through arccos and check_met over
// chordless circuits.
MetReport check_elliptope_k4free(const Graph& g, const PartialVector& x, double tol = 1e-9);

// Same membership question specialized to the circuit on n nodes, where the
// one cycle inequality family collapses to a single worst-odd-set test.
MetReport check_circuit_elliptope(int n, const PartialVector& x, double tol = 1e-9);

// The circuit test on raw pi-unit angles, for instances whose cosines are
// irrational (angles like 1/6 stay exact as text).
MetReport check_circuit_angles(int n, const AngleVector& a, double tol = 1e-9);

struct E1Report {
    bool member;
    std::vector<int> node_signs; // +1/-1 per node when member
};

// Rank-one membership: every x_e must be +1 or -1 and the signs must be
// consistent, i.e. some node labeling u with u_i u_j = x_ij on every edge.
E1Report check_e1(const Graph& g, const PartialVector& x);

} // namespace ellipt
