#pragma once

#include "ellipt/graph.hpp"
#include "ellipt/values.hpp"

#include <cstdint>
#include <vector>

namespace ellipt {

// Signed weight of a walk: sum of eps_e * d_e, each term taken positively
// when the walk traverses the stored (u, v) orientation and negatively
// otherwise. The value lives in the algebra the weights live in.
struct PhiValue {
    EdgeAngles::Mode mode;
    Rational length_sum;       // ExactLength
    RationalRotation rotation; // ExactRotation (composed rotation)
    double value = 0.0;        // Float
};

PhiValue phi(const Graph& g, const EdgeAngles& d, const SignVector& eps, const Walk& w);

struct SigningConfig {
    double tol = 1e-9;
    // Float rejections are reported ambiguous when some signing still passes
    // every check at ambiguity_factor * tol.
    double ambiguity_factor = 1000.0;
    std::uint64_t max_branch = std::uint64_t(1) << 22;
    // Accept only signings whose walk sums vanish on every simple circuit,
    // not just on the fundamental basis (cross-check mode; same verdicts).
    bool check_all_circuits = false;
    std::size_t circuit_cap = 100000;
};

struct LineWitness {
    bool exact = false;
    std::vector<Rational> exact_f; // when exact
    std::vector<double> f;         // always filled
};

struct CircleWitness {
    bool exact = false;
    std::vector<RationalRotation> exact_g; // when exact
    std::vector<double> theta;             // always filled (radians)
};

struct Ed1Result {
    bool accepted = false;
    SignVector eps;
    LineWitness witness;
    std::uint64_t branches = 0;
};

// Line embedding test: is there a node map f with |f(u) - f(v)| = d_uv on
// every edge? Searches sign choices over the BFS forest edges (the non-tree
// edges are forced), deterministically: first accepting assignment in
// lexicographic order of tree-edge choices, '+' before '-'. Exact-length
// weights are decided exactly; float weights within cfg.tol. Throws
// resource_limit past cfg.max_branch search nodes.
Ed1Result decide_ed1(const Graph& g, const EdgeAngles& d, const SigningConfig& cfg = {});

struct Gd2Result {
    bool accepted = false;
    bool ambiguous = false; // float mode only; see SigningConfig
    SignVector eps;
    CircleWitness witness;
    std::uint64_t branches = 0;
};

// Circle embedding test: is there a node map to the unit circle whose arc
// differences hit the prescribed angles? Same search; a signing is accepted
// when every fundamental-cycle sum lies in 2*pi*Z, which for exact rotations
// means the composed rotation is exactly the identity.
Gd2Result decide_gd2(const Graph& g, const EdgeAngles& d, const SigningConfig& cfg = {});

// Certified comparison of sum(d_e) against 2*pi via the rational window
// 6.283185 < 2*pi < 6.2831854. Returns true only when the total is certified
// below 2*pi; sums landing inside the window are reported false (the premise
// is then simply not certified). The float mode compares doubles directly.
bool check_small_total(const Graph& g, const EdgeAngles& d);

} // namespace ellipt
