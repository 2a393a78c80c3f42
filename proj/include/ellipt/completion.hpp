#pragma once

#include "ellipt/graph.hpp"
#include "ellipt/matrix.hpp"
#include "ellipt/signing.hpp"
#include "ellipt/values.hpp"

#include <cstdint>
#include <vector>

namespace ellipt {

// Unit vectors in R^k, one per node, certifying a rank <= k completion.
// Exact witnesses carry rational coordinates; the float view is always
// populated so verification and transport work uniformly.
struct GramWitness {
    int k = 0;
    bool exact = false;
    std::vector<std::vector<Rational>> exact_vectors;
    std::vector<std::vector<double>> vectors;

    int node_count() const { return static_cast<int>(vectors.size()); }
};

GramWitness witness_from_exact(int k, std::vector<std::vector<Rational>> vecs);
GramWitness witness_from_float(int k, std::vector<std::vector<double>> vecs);
GramWitness witness_from_circle(const CircleWitness& cw); // k = 2

struct WitnessCheck {
    bool ok;
    double max_error;
};

// Unit-norm and edge inner-product verification against cosine-mode x.
// Exact witnesses with rational targets are checked exactly; otherwise
// within tol.
WitnessCheck verify_witness(const Graph& g, const PartialVector& x, const GramWitness& w,
                            double tol = 1e-9);

struct GluedWitness {
    Graph graph;
    GramWitness witness;
    std::vector<int> g2_map; // g2 node -> merged node
};

// Clique-sum of two witnessed graphs: identify maps g2 nodes onto g1 nodes
// spanning a clique in both. W2 is carried over by an orthogonal alignment
// fixing the shared vectors; the Gram values on the shared clique must agree
// (exactly for two exact witnesses, within tol otherwise: shared_mismatch).
// The reflection freedom in the complement is resolved arbitrarily. Mixed
// dimensions are zero-padded to k = max(k1, k2); exactness is preserved
// whenever the alignment is rationally representable (shared rank 0, 1,
// k-1 or k), which covers everything at k <= 3.
GluedWitness glue_clique_sum(const Graph& g1, const GramWitness& w1, const Graph& g2,
                             const GramWitness& w2,
                             const std::vector<std::pair<int, int>>& identify, double tol = 1e-9);

// Rank <= 3 completion of a circuit instance: fan-triangulate from node 0,
// fix each chord at the midpoint of its feasible interval (triangle bounds
// intersected with the remaining circuit's bounds), build one rank <= 3
// block per triangle and glue them along the shared chords. Angles are in
// units of pi. Throws not_in_elliptope when the instance is outside the
// circuit elliptope beyond tol.
GramWitness complete_circuit(int n, const AngleVector& a, double tol = 1e-9);
GramWitness complete_circuit(int n, const PartialVector& x, double tol = 1e-9);

// Float verification of a circuit witness against angle targets (cosines of
// pi * a_e), for instances whose cosines are irrational.
WitnessCheck verify_circuit_witness(int n, const AngleVector& a, const GramWitness& w,
                                    double tol = 1e-9);

// Rank <= 3 completion for K4-minor-free instances: records the
// series-parallel reduction of g with feasible intervals on virtual edges,
// then replays it backwards, placing one point per reduction step (each
// re-added node closes a triangle with its two attachment points, so the
// construction is a chain of triangulated clique sums). Throws
// not_k4_minor_free, or not_in_elliptope when the intervals empty out.
GramWitness complete_k4free(const Graph& g, const PartialVector& x, double tol = 1e-9);

struct Coloring {
    int chi;
    std::vector<int> color; // 0-based
};

// Exact chromatic number by saturation-ordered backtracking.
Coloring chromatic_number(const Graph& g, std::uint64_t budget = std::uint64_t(1) << 26);

struct ColoringWitness {
    GramWitness witness; // exact 0/1 vectors, k = chi
    Coloring coloring;
};

// Standard-basis witness for x = 0 built from an optimal coloring: node v
// gets e_{color(v)} in R^chi, so adjacent nodes are exactly orthogonal.
ColoringWitness coloring_witness(const Graph& g, std::uint64_t budget = std::uint64_t(1) << 26);

struct CovarianceImage {
    Graph nabla;     // suspension(g, 1); the apex is node n
    PartialVector d; // distance mode on nabla's edges
    int apex;
};

// Squared-distance image of a cosine instance on the one-apex suspension:
// d(i, apex) = diag_i, d(i, j) = diag_i + diag_j - 2 x_ij.
CovarianceImage covariance_map(const Graph& g, const PartialVector& x,
                               const std::vector<Rational>* diag = nullptr);

struct EuclideanPointSet {
    int dim;
    bool exact = false;
    std::vector<std::vector<Rational>> exact_points;
    std::vector<std::vector<double>> points; // indexed by suspension nodes; apex last
};

// Moves a Gram witness to a distance realization on the suspension: the apex
// gets the origin and every node keeps its witness vector, so squared
// distances reproduce the covariance image.
EuclideanPointSet witness_transport(const Graph& g, const GramWitness& w);

// Max absolute difference between the realized squared distances and the
// covariance image (exact comparison reported as 0 / mismatch count).
WitnessCheck verify_transport(const CovarianceImage& ci, const EuclideanPointSet& pts,
                              double tol = 1e-9);

} // namespace ellipt
