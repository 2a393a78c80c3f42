#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ellipt/errors.hpp"
#include "ellipt/metric.hpp"

#include "support.hpp"

#include <cmath>

using namespace ellipt;
using namespace testsupport;

namespace {

PartialVector cosines(std::vector<Rational> v) {
    PartialVector x;
    x.values = std::move(v);
    return x;
}

// brute-force worst odd-set value over all odd F
double brute_worst(const Graph& g, const Walk& circuit, const AngleVector& a) {
    const auto steps = walk_signed_edges(g, circuit);
    const int len = static_cast<int>(steps.size());
    double best = -1e100;
    for (int mask = 0; mask < (1 << len); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) % 2 == 0) continue;
        double val = 1.0 - __builtin_popcount(static_cast<unsigned>(mask));
        for (int i = 0; i < len; ++i)
            val += (mask & (1 << i)) ? a.a[steps[i].edge] : -a.a[steps[i].edge];
        best = std::max(best, val);
    }
    return best;
}

} // namespace

TEST_CASE("angle conversions") {
    const Graph g = cycle_graph(3);
    const auto a = angles_from_cosines(g, cosines({Rational(1), Rational(-1), Rational(0)}));
    CHECK(a.a[0] == doctest::Approx(0.0));
    CHECK(a.a[1] == doctest::Approx(1.0));
    CHECK(a.a[2] == doctest::Approx(0.5));

    // rotation (0,1) is a quarter turn: angle 1/2 in pi units
    const auto b = angles_from_rotations({RationalRotation(Rational(0), Rational(1)),
                                          RationalRotation(Rational(-1), Rational(0))});
    CHECK(b.a[0] == doctest::Approx(0.5));
    CHECK(b.a[1] == doctest::Approx(1.0));

    CHECK_THROWS(validate_partial_vector(g, cosines({Rational(2), Rational(0), Rational(0)})));
    CHECK_THROWS(validate_partial_vector(g, cosines({Rational(0), Rational(0)})));
}

TEST_CASE("worst odd set matches exhaustive search") {
    auto rng = make_rng(31);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int n = 3; n <= 7; ++n) {
        const Graph g = cycle_graph(n);
        Walk circuit;
        for (int i = 0; i <= n; ++i) circuit.nodes.push_back(i % n);
        for (int trial = 0; trial < 60; ++trial) {
            AngleVector a;
            for (int e = 0; e < n; ++e) a.a.push_back(unif(rng));
            const auto [f, viol] = worst_odd_set(g, circuit, a);
            CHECK(f.size() % 2 == 1);
            CHECK(viol == doctest::Approx(brute_worst(g, circuit, a)).epsilon(1e-12));
            // reported violation is attained by the reported set
            double val = 1.0 - static_cast<double>(f.size());
            std::vector<char> in(n, 0);
            for (int e : f) in[e] = 1;
            for (int e = 0; e < n; ++e) val += in[e] ? a.a[e] : -a.a[e];
            CHECK(val == doctest::Approx(viol).epsilon(1e-12));
        }
    }
}

TEST_CASE("check_met on the worked square examples") {
    const Graph c4 = cycle_graph(4);
    const Rational z(0), h(1, 2), o(1);

    // x1 = (0,0,0,1): member, boundary through the tight edge bound
    auto r1 = check_met(c4, angles_from_cosines(c4, cosines({z, z, z, o})));
    CHECK(r1.member);
    CHECK(r1.ambiguous);

    // x3 = 0: interior
    auto r3 = check_met(c4, angles_from_cosines(c4, cosines({z, z, z, z})));
    CHECK(r3.member);
    CHECK(!r3.ambiguous);

    // x4 = (0,0,0,1/2): interior
    auto r4 = check_met(c4, angles_from_cosines(c4, cosines({z, z, z, h})));
    CHECK(r4.member);
    CHECK(!r4.ambiguous);

    // x2 angles (1/2,1/6,1/6,1/6): boundary through a tight circuit inequality
    AngleVector a2;
    a2.a = {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6};
    auto r2 = check_met(c4, a2);
    CHECK(r2.member);
    CHECK(r2.ambiguous);
    REQUIRE(r2.worst.has_value());
    CHECK(r2.worst->odd_set.size() == 1);
    CHECK(r2.worst->odd_set[0] == 0);

    // pushing the long edge past the bound leaves the polytope
    AngleVector bad;
    bad.a = {0.7, 1.0 / 6, 1.0 / 6, 1.0 / 6};
    auto rb = check_met(c4, bad);
    CHECK(!rb.member);
    REQUIRE(rb.worst.has_value());
    CHECK(rb.worst->violation > 1e-9);
}

TEST_CASE("edge bound violations are caught") {
    // a tree has no circuits, so only the box constraints can fire
    const Graph g = path_graph(3);
    AngleVector a;
    a.a = {1.5, 0.3};
    const auto r = check_met(g, a);
    CHECK(!r.member);
    REQUIRE(r.worst.has_value());
    CHECK(r.worst->circuit.nodes.empty()); // plain edge bound, no circuit
    CHECK(r.worst->odd_set == std::vector<int>{0});
    CHECK(r.worst->violation == doctest::Approx(0.5));
}

TEST_CASE("chordless circuits suffice: agreement with the all-circuits mode") {
    auto rng = make_rng(32);
    std::uniform_int_distribution<int> den(1, 6);
    for (int trial = 0; trial < 40; ++trial) {
        const Graph g = random_connected_graph(rng, 6, 0.5);
        PartialVector x;
        for (int e = 0; e < g.edge_count(); ++e) {
            const int q = den(rng);
            std::uniform_int_distribution<int> num(-q, q);
            x.values.push_back(Rational(num(rng), q));
        }
        const auto a = angles_from_cosines(g, x);
        MetConfig chordless, full;
        full.circuits = CircuitMode::AllUpToLen;
        const auto rc = check_met(g, a, chordless);
        const auto rf = check_met(g, a, full);
        CHECK(rc.member == rf.member);
    }
}

TEST_CASE("check_elliptope_k4free wants a k4-minor-free graph") {
    CHECK_THROWS_AS(
        check_elliptope_k4free(complete_graph(4),
                               cosines({Rational(0), Rational(0), Rational(0), Rational(0),
                                        Rational(0), Rational(0)})),
        not_k4_minor_free);

    // two coincident unit vectors cannot be antipodal to the same third one
    const Graph c3 = cycle_graph(3);
    const auto rej =
        check_elliptope_k4free(c3, cosines({Rational(1), Rational(1), Rational(-1)}));
    CHECK(!rej.member);
    const auto acc = check_elliptope_k4free(c3, cosines({Rational(0), Rational(0), Rational(0)}));
    CHECK(acc.member);
    // (0, 0, 1) sits on the boundary: u0 = u2 orthogonal to u1
    const auto bd = check_elliptope_k4free(c3, cosines({Rational(0), Rational(0), Rational(1)}));
    CHECK(bd.member);
    CHECK(bd.ambiguous);
}

TEST_CASE("circuit membership specialization agrees with the general test") {
    auto rng = make_rng(33);
    std::uniform_int_distribution<int> den(1, 5);
    for (int n = 3; n <= 8; ++n) {
        const Graph g = cycle_graph(n);
        for (int trial = 0; trial < 40; ++trial) {
            PartialVector x;
            for (int e = 0; e < n; ++e) {
                const int q = den(rng);
                std::uniform_int_distribution<int> num(-q, q);
                x.values.push_back(Rational(num(rng), q));
            }
            const auto circ = check_circuit_elliptope(n, x);
            const auto gen = check_elliptope_k4free(g, x);
            CHECK(circ.member == gen.member);
        }
    }
}

TEST_CASE("rank-one membership is exact sign consistency") {
    const Graph c4 = cycle_graph(4);
    const Rational o(1), m(-1);

    auto even = check_e1(c4, cosines({m, m, o, o}));
    CHECK(even.member);
    // signs certify the input: u_i u_j = x_ij on every edge
    for (int e = 0; e < 4; ++e) {
        const auto [u, v] = c4.edge(e);
        CHECK(Rational(even.node_signs[u] * even.node_signs[v]) ==
              cosines({m, m, o, o}).values[e]);
    }

    // odd number of -1 edges around a circuit cannot be consistent
    CHECK(!check_e1(c4, cosines({m, o, o, o})).member);
    // any interior value refuses immediately
    CHECK(!check_e1(c4, cosines({Rational(1, 2), o, o, o})).member);

    // exhaustive cross-check against all sign labelings on random graphs
    auto rng = make_rng(34);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = random_connected_graph(rng, 6, 0.4);
        PartialVector x;
        for (int e = 0; e < g.edge_count(); ++e)
            x.values.push_back(rng() & 1 ? Rational(1) : Rational(-1));
        bool brute = false;
        for (int mask = 0; mask < 64 && !brute; ++mask) {
            bool ok = true;
            for (int e = 0; e < g.edge_count() && ok; ++e) {
                const auto [u, v] = g.edge(e);
                const int su = (mask >> u) & 1 ? -1 : 1, sv = (mask >> v) & 1 ? -1 : 1;
                ok = Rational(su * sv) == x.values[e];
            }
            brute = ok;
        }
        CHECK(check_e1(g, x).member == brute);
    }
}

TEST_CASE("met membership tracks the elliptope exactly on circuits") {
    // cos(pi a) pointwise: a in MET(C_n) iff x in E(C_n); sample near the
    // boundary to exercise both verdicts
    auto rng = make_rng(35);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 5);
        AngleVector a;
        double sum = 0;
        for (int e = 0; e < n; ++e) {
            a.a.push_back(unif(rng) < 0.7 ? 0.05 * unif(rng) : unif(rng));
            sum += a.a.back();
        }
        const auto r = check_circuit_angles(n, a);
        // independent check of the full inequality system
        const Graph g = cycle_graph(n);
        Walk circuit;
        for (int i = 0; i <= n; ++i) circuit.nodes.push_back(i % n);
        const double worst = brute_worst(g, circuit, a);
        CHECK(r.member == (worst <= 1e-9));
    }
}
