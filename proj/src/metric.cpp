#include "ellipt/metric.hpp"

#include "ellipt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellipt {

void validate_partial_vector(const Graph& g, const PartialVector& x) {
    if (static_cast<int>(x.values.size()) != g.edge_count())
        throw dimension_mismatch("partial vector has " + std::to_string(x.values.size()) +
                                 " entries for " + std::to_string(g.edge_count()) + " edges");
    for (const Rational& v : x.values) {
        if (x.mode == PartialVector::Mode::Cosine && (v < -1 || v > 1))
            throw std::invalid_argument("cosine entry outside [-1, 1]: " + format_rational(v));
        if (x.mode == PartialVector::Mode::Distance && v < 0)
            throw std::invalid_argument("negative distance entry: " + format_rational(v));
    }
}

void validate_edge_angles(const Graph& g, const EdgeAngles& d) {
    if (d.size() != g.edge_count())
        throw dimension_mismatch("edge data has " + std::to_string(d.size()) + " entries for " +
                                 std::to_string(g.edge_count()) + " edges");
    if (d.mode == EdgeAngles::Mode::ExactLength)
        for (const Rational& v : d.lengths)
            if (v < 0) throw std::invalid_argument("negative edge length");
    if (d.mode == EdgeAngles::Mode::Float)
        for (double v : d.values)
            if (v < 0 || !std::isfinite(v)) throw std::invalid_argument("bad float edge value");
}

AngleVector angles_from_cosines(const Graph& g, const PartialVector& x) {
    if (x.mode != PartialVector::Mode::Cosine)
        throw std::invalid_argument("cosine-mode vector expected");
    validate_partial_vector(g, x);
    AngleVector a;
    a.a.reserve(x.values.size());
    for (const Rational& v : x.values) a.a.push_back(std::acos(to_double(v)) / M_PI);
    return a;
}

AngleVector angles_from_rotations(const std::vector<RationalRotation>& rot) {
    AngleVector a;
    a.a.reserve(rot.size());
    for (const auto& r : rot) {
        // s >= 0 reads as an angle in [0, pi]
        double ang = std::atan2(std::abs(to_double(r.s)), to_double(r.c));
        a.a.push_back(ang / M_PI);
    }
    return a;
}

std::pair<std::vector<int>, double> worst_odd_set(const Graph& g, const Walk& circuit,
                                                  const AngleVector& a) {
    const auto steps = walk_signed_edges(g, circuit);
    if (steps.empty() || !circuit.closed())
        throw std::invalid_argument("worst_odd_set wants a closed walk");
    // violation(F) = 1 - a(C) + sum_{e in F} (2 a_e - 1), F odd
    double base = 1.0;
    std::vector<int> f;
    int flip = -1;
    double flip_cost = 0.0;
    for (const auto& se : steps) {
        const double ae = a.a[se.edge];
        base -= ae;
        const double gain = 2.0 * ae - 1.0;
        if (gain > 0) {
            f.push_back(se.edge);
            base += gain;
        }
        if (flip < 0 || std::abs(gain) < flip_cost) {
            flip = se.edge;
            flip_cost = std::abs(gain);
        }
    }
    if (f.size() % 2 == 0) {
        // parity fix: flip the cheapest edge in or out
        base -= flip_cost;
        const auto it = std::find(f.begin(), f.end(), flip);
        if (it != f.end())
            f.erase(it);
        else
            f.push_back(flip);
    }
    std::sort(f.begin(), f.end());
    return {std::move(f), base};
}

namespace {

MetReport report_from_worst(double worst_violation, MetViolation worst, double tol) {
    MetReport rep;
    rep.member = worst_violation <= tol;
    rep.ambiguous = std::abs(worst_violation) <= tol;
    if (worst_violation > -tol) rep.worst = std::move(worst);
    return rep;
}

} // namespace

MetReport check_met(const Graph& g, const AngleVector& a, const MetConfig& cfg) {
    if (static_cast<int>(a.a.size()) != g.edge_count())
        throw dimension_mismatch("angle vector length mismatch");
    double worst_v = -1e300;
    MetViolation worst;
    const auto consider = [&](double v, MetViolation mv) {
        if (v > worst_v) {
            worst_v = v;
            worst = std::move(mv);
        }
    };
    for (int e = 0; e < g.edge_count(); ++e) {
        consider(a.a[e] - 1.0, {Walk{}, {e}, a.a[e] - 1.0});
        consider(-a.a[e], {Walk{}, {e}, -a.a[e]});
    }
    const int max_len = cfg.max_len > 0 ? cfg.max_len : g.node_count();
    auto circuits = enumerate_circuits(g, max_len, cfg.max_circuits);
    for (auto& c : circuits) {
        if (cfg.circuits == CircuitMode::ChordlessOnly && !is_chordless(g, c)) continue;
        auto [f, v] = worst_odd_set(g, c, a);
        consider(v, {c, std::move(f), v});
    }
    return report_from_worst(worst_v, std::move(worst), cfg.tol);
}

MetReport check_elliptope_k4free(const Graph& g, const PartialVector& x, double tol) {
    if (!is_k4_minor_free(g)) throw not_k4_minor_free("graph has a K4 minor");
    const AngleVector a = angles_from_cosines(g, x);
    MetConfig cfg;
    cfg.circuits = CircuitMode::ChordlessOnly;
    cfg.tol = tol;
    return check_met(g, a, cfg);
}

MetReport check_circuit_angles(int n, const AngleVector& a, double tol) {
    const Graph g = cycle_graph(n);
    if (static_cast<int>(a.a.size()) != n)
        throw dimension_mismatch("angle vector length mismatch");
    double worst_v = -1e300;
    MetViolation worst;
    for (int e = 0; e < n; ++e) {
        if (a.a[e] - 1.0 > worst_v) {
            worst_v = a.a[e] - 1.0;
            worst = {Walk{}, {e}, worst_v};
        }
        if (-a.a[e] > worst_v) {
            worst_v = -a.a[e];
            worst = {Walk{}, {e}, worst_v};
        }
    }
    Walk c;
    for (int i = 0; i < n; ++i) c.nodes.push_back(i);
    c.nodes.push_back(0);
    auto [f, v] = worst_odd_set(g, c, a);
    if (v > worst_v) {
        worst_v = v;
        worst = {std::move(c), std::move(f), v};
    }
    return report_from_worst(worst_v, std::move(worst), tol);
}

MetReport check_circuit_elliptope(int n, const PartialVector& x, double tol) {
    const Graph g = cycle_graph(n);
    return check_circuit_angles(n, angles_from_cosines(g, x), tol);
}

E1Report check_e1(const Graph& g, const PartialVector& x) {
    validate_partial_vector(g, x);
    if (x.mode != PartialVector::Mode::Cosine) throw std::invalid_argument("cosine mode expected");
    for (const Rational& v : x.values)
        if (v != 1 && v != -1) return {false, {}};
    std::vector<int> u(g.node_count(), 0);
    for (int s = 0; s < g.node_count(); ++s) {
        if (u[s] != 0) continue;
        u[s] = 1;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            for (const auto& [b, e] : g.incident(a)) {
                const int want = x.values[e] == 1 ? u[a] : -u[a];
                if (u[b] == 0) {
                    u[b] = want;
                    stack.push_back(b);
                } else if (u[b] != want) {
                    return {false, {}};
                }
            }
        }
    }
    return {true, std::move(u)};
}

} // namespace ellipt
