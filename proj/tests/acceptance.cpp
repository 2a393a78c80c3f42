// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each check states its own tolerance and budget; nothing here is tunable
// from the command line on purpose, so a green run always means the same
// thing.

#include "ellipt/completion.hpp"
#include "ellipt/errors.hpp"
#include "ellipt/instance_io.hpp"
#include "ellipt/metric.hpp"
#include "ellipt/reductions.hpp"
#include "ellipt/signing.hpp"

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace ellipt;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(const std::string& name, const std::function<std::string()>& body) {
    const auto t0 = Clock::now();
    std::string detail;
    bool pass = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!pass) ++failures;
    std::printf("%s %s: %s [%.2fs]\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str(),
                secs);
    std::fflush(stdout);
}

struct check_failed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& what) {
    if (!cond) throw check_failed(what);
}

PartialVector cosines(std::vector<Rational> v) {
    return PartialVector{PartialVector::Mode::Cosine, std::move(v)};
}

EdgeAngles radians_of(const AngleVector& a) {
    std::vector<double> v;
    for (double x : a.a) v.push_back(x * std::numbers::pi);
    return EdgeAngles::from_floats(v);
}

// +-1 combination of the weights vanishes iff some subset hits half the sum
bool subset_enumeration_oracle(const std::vector<BigInt>& a) {
    BigInt total = 0;
    for (const auto& w : a) total += w;
    if (total % 2 != 0) return false;
    const int n = static_cast<int>(a.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        BigInt s = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) s += a[i];
        if (2 * s == total) return true;
    }
    return false;
}

std::vector<RationalRotation> correlated_rotations(std::mt19937_64& rng, int m) {
    std::vector<RationalRotation> rot;
    const RationalRotation base = random_rotation(rng);
    for (int e = 0; e < m; ++e) rot.push_back(rot_power(base, 1 + static_cast<int>(rng() % 3)));
    return rot;
}

// --- criterion 1: the four pinned 4-circuit instances ---------------------

std::string criterion_1() {
    const auto t0 = Clock::now();
    const Graph c4 = cycle_graph(4);
    const Rational h(1, 2);
    const PartialVector x1 = cosines({0, 0, 0, Rational(1)});
    const AngleVector a2{{0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6}}; // cosines (0, s3/2, s3/2, s3/2)
    const PartialVector x3 = cosines({0, 0, 0, 0});
    const PartialVector x4 = cosines({0, 0, 0, h});

    // float circle decider at tol 1e-9
    const SigningConfig cfg;
    expect(!decide_gd2(c4, radians_of(angles_from_cosines(c4, x1)), cfg).accepted,
           "boundary rank-3 instance must be rejected by the rank-2 test");
    expect(!decide_gd2(c4, radians_of(angles_from_cosines(c4, x4)), cfg).accepted,
           "interior rank-3 instance must be rejected by the rank-2 test");
    expect(decide_gd2(c4, radians_of(angles_from_cosines(c4, x3)), cfg).accepted,
           "the all-orthogonal instance must pass the rank-2 test");
    expect(decide_gd2(c4, radians_of(a2), cfg).accepted,
           "the tight-circuit instance must pass the rank-2 test");

    // completions: rank <= 3 witnesses verified at 1e-9
    for (const PartialVector* x : {&x1, &x3, &x4}) {
        const GramWitness w = complete_circuit(4, *x);
        expect(w.k <= 3, "completion rank exceeds 3");
        const auto chk = verify_witness(c4, *x, w, 1e-9);
        expect(chk.ok, "completion failed verification");
    }
    const GramWitness w2 = complete_circuit(4, a2);
    expect(w2.k <= 3, "completion rank exceeds 3");
    expect(verify_circuit_witness(4, a2, w2, 1e-9).ok, "completion failed verification");

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    expect(secs < 1.0, "runtime budget of 1s exceeded");
    return "2 rejects + 2 accepts at tol 1e-9, 4 completions verified, rank <= 3";
}

// --- criterion 2: every weight multiset, both reductions, vs enumeration --

std::string criterion_2() {
    const auto t0 = Clock::now();
    const auto sets = enumerate_weight_multisets(10, 40);
    std::uint64_t checked = 0;
    for (const auto& a : sets) {
        const bool oracle = subset_enumeration_oracle(a);
        const auto r1 = verify_reduction(reduce_partition_to_ed1(a));
        const auto r2 = verify_reduction(reduce_partition_to_gd2(a));
        if (!r1.agree || r1.decider_accepts != oracle || !r2.agree ||
            r2.decider_accepts != oracle) {
            std::ostringstream os;
            os << "disagreement on multiset {";
            for (const auto& w : a) os << " " << w;
            os << " }: line " << r1.detail << "; circle " << r2.detail;
            throw check_failed(os.str());
        }
        ++checked;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    expect(secs < 60.0, "runtime budget of 60s exceeded");
    std::ostringstream os;
    os << checked << " multisets (n <= 10, sum <= 40), both exact deciders match enumeration";
    return os.str();
}

// --- criterion 3: {1,2}-weighted line instances through the circle test ---

std::string criterion_3() {
    const auto t0 = Clock::now();
    const auto batch = random_saxe_corpus(5000, 6, 2026);
    const auto rep = verify_many(batch, {}, std::uint64_t(1) << 20, 4);
    expect(rep.instances == 5000, "corpus size mismatch");
    expect(rep.disagreements == 0, "disagreement: " + rep.first_detail);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    expect(secs < 300.0, "runtime budget of 5min exceeded");
    return "5000 connected instances (n <= 6, weights in {1,2}), circle = line verdicts, "
           "winding premise certified";
}

// --- criterion 4: pendant-triangle lifts ----------------------------------

std::string criterion_4() {
    const auto batch = random_hat_corpus(500, 6, 2027);
    const auto rep = verify_many(batch, {}, std::uint64_t(1) << 20, 4);
    expect(rep.instances == 500, "corpus size mismatch");
    expect(rep.disagreements == 0, "failure: " + rep.first_detail);
    return "500 lifts: blocks extreme exactly, restriction intact, verdicts agree";
}

// --- criterion 5: membership vs completion round trip ---------------------

std::string criterion_5() {
    auto rng = make_rng(2028);
    int members = 0, outsiders = 0;
    while (members + outsiders < 500) {
        const Graph g = random_connected_graph(rng, 3 + static_cast<int>(rng() % 6), 0.35);
        if (!is_k4_minor_free(g)) continue;
        std::vector<Rational> v;
        for (int e = 0; e < g.edge_count(); ++e) {
            std::uniform_int_distribution<int> den(1, 6);
            const int q = den(rng);
            std::uniform_int_distribution<int> num(-q, q);
            v.emplace_back(num(rng), q);
        }
        const PartialVector x = cosines(v);
        const auto rep = check_elliptope_k4free(g, x, 1e-9);
        if (rep.member) {
            GramWitness w;
            try {
                w = complete_k4free(g, x, 1e-9);
            } catch (const not_in_elliptope& e) {
                throw check_failed(std::string("member refused completion: ") + e.what());
            }
            const auto chk = verify_witness(g, x, w, 1e-9);
            expect(chk.ok, "member completion failed verification");
            ++members;
        } else {
            expect(rep.worst.has_value() && rep.worst->violation > 1e-9,
                   "rejection without a violated inequality beyond tolerance");
            ++outsiders;
        }
    }
    std::ostringstream os;
    os << members << " members completed and verified at 1e-9, " << outsiders
       << " rejections each with a violated circuit/edge inequality";
    return os.str();
}

// --- criterion 6: cycle basis vs full circuit enumeration -----------------

std::string criterion_6() {
    auto rng = make_rng(2029);
    SigningConfig all;
    all.check_all_circuits = true;
    int done = 0;
    while (done < 1000) {
        const Graph g = random_connected_graph(rng, 3 + static_cast<int>(rng() % 5), 0.5);
        if (done % 2 == 0) {
            const EdgeAngles d =
                EdgeAngles::from_rotations(correlated_rotations(rng, g.edge_count()));
            expect(decide_gd2(g, d).accepted == decide_gd2(g, d, all).accepted,
                   "circle verdict depends on the circuit family");
        } else {
            std::uniform_int_distribution<int> len(0, 5);
            std::vector<Rational> ls;
            for (int e = 0; e < g.edge_count(); ++e) ls.emplace_back(len(rng));
            const EdgeAngles d = EdgeAngles::from_lengths(ls);
            expect(decide_ed1(g, d).accepted == decide_ed1(g, d, all).accepted,
                   "line verdict depends on the circuit family");
        }
        ++done;
    }
    return "1000 instances (n <= 7): cycle-basis verdicts equal full-enumeration verdicts";
}

// --- criterion 7: exact rotation identities -------------------------------

std::string criterion_7() {
    auto rng = make_rng(2030);
    std::vector<BigInt> ds;
    for (long d = 1; d <= 64; ++d) ds.emplace_back(d);
    std::uniform_int_distribution<long> big(65, 1000000);
    for (int i = 0; i < 200; ++i) ds.emplace_back(big(rng));
    ds.emplace_back(1000000);
    for (const auto& d : ds) {
        const RationalRotation a = alpha_for_total(d);
        expect(a.c * a.c + a.s * a.s == 1, "rotation left the rational circle");
        expect(a.s > 0 && Rational(2) * d * a.s < 1, "winding bound violated");
        expect(alpha_premise_certified(a, d), "premise certificate refused");
    }
    for (int trial = 0; trial < 8; ++trial) {
        const RationalRotation r = random_rotation(rng);
        RationalRotation acc; // identity
        for (int t = 0; t <= 256; ++t) {
            expect(rot_power(r, t) == acc, "power disagrees with iterated composition");
            expect(rot_power(r, -t) == rot_inverse(acc), "negative power disagrees");
            acc = rot_compose(acc, r);
        }
    }
    return "265 totals certified exactly; powers match composition up to exponent 256";
}

// --- criterion 8: coloring witnesses and the rank-2 slice -----------------

std::string criterion_8() {
    auto rng = make_rng(2031);
    for (int trial = 0; trial < 200; ++trial) {
        const Graph g = random_connected_graph(rng, 2 + static_cast<int>(rng() % 11), 0.3);
        const auto cw = coloring_witness(g);
        expect(cw.witness.k == cw.coloring.chi, "witness dimension differs from chi");
        for (int e = 0; e < g.edge_count(); ++e) {
            const auto [u, v] = g.edge(e);
            expect(cw.coloring.color[u] != cw.coloring.color[v], "coloring not proper");
        }
        const PartialVector zeros = cosines(std::vector<Rational>(g.edge_count(), Rational(0)));
        const auto chk = verify_witness(g, zeros, cw.witness);
        expect(chk.ok && chk.max_error == 0.0, "coloring witness not exactly orthogonal");
    }

    // bipartite slice: the circle decider accepts x = 0 and two colors suffice
    const RationalRotation q(Rational(0), Rational(1));
    for (int trial = 0; trial < 20; ++trial) {
        const int half = 2 + static_cast<int>(rng() % 3);
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < half; ++i)
            for (int j = half; j < 2 * half; ++j)
                if (rng() % 2) edges.emplace_back(i, j);
        if (edges.empty()) edges.emplace_back(0, half);
        const Graph g(2 * half, edges);
        const std::vector<RationalRotation> rot(g.edge_count(), q);
        expect(decide_gd2(g, EdgeAngles::from_rotations(rot)).accepted,
               "bipartite zero instance rejected by the rank-2 test");
        expect(coloring_witness(g).witness.k == 2, "bipartite witness not two-dimensional");
    }

    const Graph c5 = cycle_graph(5);
    const std::vector<RationalRotation> rot5(5, q);
    expect(!decide_gd2(c5, EdgeAngles::from_rotations(rot5)).accepted,
           "odd circuit zero instance accepted by the rank-2 test");
    expect(coloring_witness(c5).witness.k == 3, "odd circuit needs three colors");
    return "200 witnesses have dimension chi; bipartite accepts at rank 2, 5-circuit needs 3";
}

// --- criterion 9: transported witnesses reproduce the distance image ------

std::string criterion_9() {
    auto rng = make_rng(2032);
    int exact_count = 0, float_count = 0;
    while (exact_count < 50) {
        const Graph g = random_connected_graph(rng, 3 + static_cast<int>(rng() % 4), 0.5);
        const EdgeAngles d =
            EdgeAngles::from_rotations(correlated_rotations(rng, g.edge_count()));
        const auto r = decide_gd2(g, d);
        std::vector<Rational> v;
        for (int e = 0; e < g.edge_count(); ++e) v.push_back(d.rotations[e].c);
        const PartialVector x = cosines(v);
        const CovarianceImage ci = covariance_map(g, x);
        if (!r.accepted) continue;

        // exact circle witness: distances must match exactly
        const GramWitness w = witness_from_circle(r.witness);
        const auto chk = verify_transport(ci, witness_transport(g, w));
        expect(chk.ok && chk.max_error == 0.0, "exact transport mismatch");
        ++exact_count;

        // the float decider on the same instance: within 1e-9
        std::vector<double> theta;
        for (int e = 0; e < g.edge_count(); ++e) theta.push_back(rotation_angle(d.rotations[e]));
        const auto rf = decide_gd2(g, EdgeAngles::from_floats(theta));
        if (rf.accepted) {
            const GramWitness wf = witness_from_circle(rf.witness);
            const auto cf = verify_transport(ci, witness_transport(g, wf), 1e-9);
            expect(cf.ok, "float transport beyond 1e-9");
            ++float_count;
        }
    }
    // coloring witnesses transport exactly as well
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = random_connected_graph(rng, 3 + static_cast<int>(rng() % 6), 0.4);
        const auto cw = coloring_witness(g);
        const PartialVector zeros = cosines(std::vector<Rational>(g.edge_count(), Rational(0)));
        const auto chk = verify_transport(covariance_map(g, zeros), witness_transport(g, cw.witness));
        expect(chk.ok && chk.max_error == 0.0, "coloring transport mismatch");
    }
    std::ostringstream os;
    os << exact_count << " exact + " << float_count
       << " float circle witnesses and 50 coloring witnesses reproduce the distance image";
    return os.str();
}

} // namespace

int main() {
    run("criterion-1", criterion_1);
    run("criterion-2", criterion_2);
    run("criterion-3", criterion_3);
    run("criterion-4", criterion_4);
    run("criterion-5", criterion_5);
    run("criterion-6", criterion_6);
    run("criterion-7", criterion_7);
    run("criterion-8", criterion_8);
    run("criterion-9", criterion_9);
    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
