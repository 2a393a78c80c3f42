#pragma once

#include "ellipt/completion.hpp"
#include "ellipt/graph.hpp"
#include "ellipt/rotation.hpp"
#include "ellipt/signing.hpp"
#include "ellipt/values.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ellipt {

enum class ReductionKind {
    PartitionEd1,
    PartitionGd2,
    SaxeGd2,
    ColoringGd3,
    SaxeEdk,
    HatLift,
};

// Two-terminal attachment gadget for the coloring construction. The gadget
// topology is an input, not a constant: verify_reduction checks the
// chromatic equivalence it is supposed to provide instead of trusting it.
struct Gadget {
    Graph graph;
    int t1 = 0, t2 = 1;
};

// A generated hardness instance: the source data, the produced decider
// input, and the exact certificate metadata needed to verify the
// construction later without regenerating it.
struct ReductionInstance {
    ReductionKind kind = ReductionKind::PartitionEd1;

    // source side
    std::vector<BigInt> weights; // partition a_i, or saxe d_e aligned to source_graph
    Graph source_graph;          // saxe / coloring / saxe-edk / hat-lift
    PartialVector source_x;      // hat-lift
    EdgeAngles source_angles;    // hat-lift: exact rotations behind source_x (may be empty)
    Gadget gadget;               // coloring
    int target_k = 0;            // coloring / saxe-edk

    // produced side
    Graph graph;
    EdgeAngles angles; // decider input (lengths or rotations); empty for coloring/saxe-edk
    PartialVector x;   // coloring zeros / hat-lift x-hat
    std::vector<BigInt> out_weights;            // saxe-edk d in {1,2} per produced edge
    Graph pre_suspension;                       // coloring: gadget-augmented graph before apexes
    std::vector<std::array<int, 3>> triangles;  // hat-lift blocks {i, j, v_ij}

    // certificate
    bool has_alpha = false;
    RationalRotation alpha;
    BigInt total = 0; // D or A
};

// Exact rotation with cos = (16D^2-1)/(16D^2+1), sin = 8D/(16D^2+1); its
// angle satisfies alpha < 2 sin(alpha) <= 1/D.
RationalRotation alpha_for_total(const BigInt& d);

// The rational inequalities c > 0, s > 0, 2*D*s < 1, which together certify
// that D copies of the rotation angle stay strictly below 2*pi.
bool alpha_premise_certified(const RationalRotation& alpha, const BigInt& d);

// Partition multiset -> circuit with integer edge lengths a_i. A line
// embedding exists iff some +-1 combination of the a_i vanishes, i.e. iff a
// is partitionable. Circuits need n >= 3 nodes, so shorter inputs are padded
// with zero-weight edges, which leave both sides of the equivalence alone.
ReductionInstance reduce_partition_to_ed1(const std::vector<BigInt>& a);

// Same source, circle target: edge i carries rot_power(alpha, a_i) with
// alpha = alpha_for_total(sum a_i), so any +-1 combination winds less than a
// full turn and the circle test degenerates to the line test. Exact output.
ReductionInstance reduce_partition_to_gd2(const std::vector<BigInt>& a);

// {1,2}-weighted graph -> exact circle instance with rotations alpha and
// alpha^2; throws bad_weights on any other weight.
ReductionInstance reduce_saxe_to_gd2(const Graph& g, const std::vector<int>& d);

// Attach a fresh gadget copy between every pair of distinct nodes (terminals
// t1 -> i, t2 -> j), then add k-3 pairwise-adjacent apexes; x = 0 everywhere.
ReductionInstance build_coloring_instance(const Graph& g, const Gadget& gadget, int k);

// k-2 suspensions of H with weight 1 on edges at the last apex and 2
// elsewhere; equals the covariance image of (one fewer suspension, x = 0).
ReductionInstance build_saxe_edk_instance(const Graph& h, int k);

// Pendant-triangle lift: one new node per edge with the exact values
//   x = 0:  (i,v) -> 4/5, (j,v) -> 3/5
//   else:   (i,v) -> x_ij, (j,v) -> 2 x_ij^2 - 1
// Every 3x3 triangle block must land on an extreme point of the 3-elliptope
// (block_not_extreme otherwise). When the caller supplies the exact
// rotations behind x, the produced instance also carries exact rotations
// (r and r^2 per triangle) so both sides stay decidable in EXACT mode.
ReductionInstance hat_lift(const Graph& g, const PartialVector& x,
                           const EdgeAngles* rotations = nullptr);

struct VerifyReport {
    bool agree = false;
    bool decider_accepts = false;
    bool oracle_accepts = false;
    std::string detail;
};

// Runs the matched decider against the matched brute-force oracle (or the
// structural identity for generator-only kinds) and reports AGREE/DISAGREE.
VerifyReport verify_reduction(const ReductionInstance& inst, const SigningConfig& cfg = {},
                              std::uint64_t budget = std::uint64_t(1) << 20);

struct SweepReport {
    std::uint64_t instances = 0;
    std::uint64_t disagreements = 0;
    std::string first_detail; // first disagreement, empty when clean
};

// All weight multisets with n <= max_n entries and sum <= max_sum,
// nondecreasing, entries >= 1.
std::vector<std::vector<BigInt>> enumerate_weight_multisets(int max_n, int max_sum);

// Deterministic randomized corpora for the sweep verbs. Generation is
// serial and seed-driven; verification may fan out.
std::vector<ReductionInstance> random_saxe_corpus(int count, int max_n, std::uint64_t seed);
std::vector<ReductionInstance> random_hat_corpus(int count, int max_n, std::uint64_t seed);

// Verifies a batch with jobs workers; results are aggregated in index order
// so the report does not depend on the worker count.
SweepReport verify_many(const std::vector<ReductionInstance>& batch, const SigningConfig& cfg = {},
                        std::uint64_t budget = std::uint64_t(1) << 20, int jobs = 1);

} // namespace ellipt
