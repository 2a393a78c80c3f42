#include "ellipt/signing.hpp"

#include "ellipt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellipt {

PhiValue phi(const Graph& g, const EdgeAngles& d, const SignVector& eps, const Walk& w) {
    validate_edge_angles(g, d);
    if (static_cast<int>(eps.sign.size()) != g.edge_count())
        throw dimension_mismatch("sign vector length mismatch");
    const auto steps = walk_signed_edges(g, w);
    PhiValue out;
    out.mode = d.mode;
    out.length_sum = 0;
    for (const auto& se : steps) {
        const int s = se.sign * eps.sign[se.edge];
        switch (d.mode) {
            case EdgeAngles::Mode::ExactLength:
                out.length_sum += s > 0 ? d.lengths[se.edge] : -d.lengths[se.edge];
                break;
            case EdgeAngles::Mode::ExactRotation:
                out.rotation = rot_compose(out.rotation, s > 0 ? d.rotations[se.edge]
                                                               : rot_inverse(d.rotations[se.edge]));
                break;
            case EdgeAngles::Mode::Float:
                out.value += s > 0 ? d.values[se.edge] : -d.values[se.edge];
                break;
        }
    }
    return out;
}

namespace {

// One potential-propagation search shared by both deciders and all weight
// modes. Ops supplies the potential algebra:
//   Pot root(); Pot advance(p, edge, sigma)   potential across a tree edge,
//                                             sigma = sign of the step in
//                                             traversal direction
//   int sigma_count(edge)                     1 when both signs coincide
//   int check(pu, pv, edge, &eps)             non-tree edge against stored
//                                             endpoints; 0 fail, 1 within the
//                                             relaxed band, 2 strict
//   bool vanishes(steps, eps)                 strict walk test (all-circuits
//                                             cross-check mode)
//   double shadow(edge), bool modular(),      float view of the weights,
//   double slack(cfg)                         feeding the prefix bound below
template <typename Pot, typename Ops>
struct Searcher {
    const Graph& g;
    const Ops& ops;
    const SigningConfig& cfg;
    CycleBasis cb;
    std::vector<int> pos;                   // node -> index in cb.order
    std::vector<std::vector<int>> triggers; // non-tree edges to check per index
    std::vector<Pot> pot;
    std::vector<int> eps;
    std::vector<Walk> all_circuits;
    std::uint64_t branches = 0;
    bool relaxed_found = false;

    // Float shadow of the cycle constraints, used only to discard subtrees
    // that certifiably cannot close some fundamental cycle: per cycle we
    // track the signed contribution of the assigned tree edges and the total
    // magnitude of the unassigned ones, and cut when the gap to the nearest
    // closing value exceeds what is left plus margin_. The margin sits far
    // above accumulated float error and at least the accept/ambiguity band
    // above zero, so no (even relaxed) accepting signing is ever discarded;
    // exact verdicts stay exact.
    bool modular_ = false;
    double margin_ = 0;
    std::vector<double> sh_;    // per edge: signed one-step magnitude
    std::vector<char> pinned_;  // order index -> tree-edge sign fixed to +1
    std::vector<std::vector<std::pair<int, int>>> through_; // tree edge -> (cycle, coef)
    std::vector<double> cyc_known_, cyc_rem_, cyc_target_;

    Searcher(const Graph& graph, const Ops& o, const SigningConfig& c)
        : g(graph), ops(o), cfg(c), cb(fundamental_cycles(graph)) {
        pos.assign(g.node_count(), 0);
        for (std::size_t i = 0; i < cb.order.size(); ++i) pos[cb.order[i]] = static_cast<int>(i);
        triggers.resize(g.node_count());
        for (int e : cb.non_tree_edges) {
            const auto [u, v] = g.edge(e);
            triggers[std::max(pos[u], pos[v])].push_back(e);
        }
        pot.resize(g.node_count());
        eps.assign(g.edge_count(), +1);
        if (cfg.check_all_circuits)
            all_circuits = enumerate_circuits(g, g.node_count(), cfg.circuit_cap);

        // Negating every edge sign of a component reflects its embedding and
        // preserves all cycle sums, so the first sign that actually branches
        // in each component can be pinned to +1.
        pinned_.assign(cb.order.size(), 0);
        bool have_pin = false;
        for (std::size_t i = 0; i < cb.order.size(); ++i) {
            const int w = cb.order[i];
            if (cb.parent[w] < 0) {
                have_pin = false;
            } else if (!have_pin && ops.sigma_count(cb.parent_edge[w]) == 2) {
                pinned_[i] = 1;
                have_pin = true;
            }
        }

        modular_ = ops.modular();
        const int m = g.edge_count();
        sh_.resize(m);
        double total = 0;
        for (int e = 0; e < m; ++e) {
            double v = ops.shadow(e);
            if (modular_) v = std::remainder(v, 2.0 * M_PI);
            sh_[e] = v;
            total += std::abs(v);
        }
        margin_ = ops.slack(cfg) + 1e-9 * (1.0 + total);
        std::vector<int> eta_edge(m, +1);
        for (int w2 = 0; w2 < g.node_count(); ++w2)
            if (cb.parent[w2] >= 0)
                eta_edge[cb.parent_edge[w2]] = g.edge(cb.parent_edge[w2]).first == cb.parent[w2]
                                                   ? +1
                                                   : -1;
        through_.resize(m);
        cyc_known_.assign(cb.non_tree_edges.size(), 0.0);
        cyc_rem_.assign(cb.non_tree_edges.size(), 0.0);
        cyc_target_.resize(cb.non_tree_edges.size());
        for (std::size_t ci = 0; ci < cb.non_tree_edges.size(); ++ci) {
            const int nte = cb.non_tree_edges[ci];
            cyc_target_[ci] = std::abs(sh_[nte]);
            for (const auto& se : walk_signed_edges(g, cb.cycles[ci])) {
                if (se.edge == nte) continue;
                through_[se.edge].push_back({static_cast<int>(ci), se.sign * eta_edge[se.edge]});
                cyc_rem_[ci] += std::abs(sh_[se.edge]);
            }
        }
    }

    // Distance from the assigned contribution to the nearest value that
    // would let this cycle close (either sign of its non-tree edge).
    double closing_gap(int ci) const {
        const double k = cyc_known_[ci], t = cyc_target_[ci];
        if (modular_)
            return std::min(std::abs(std::remainder(k - t, 2.0 * M_PI)),
                            std::abs(std::remainder(k + t, 2.0 * M_PI)));
        return std::min(std::abs(k - t), std::abs(k + t));
    }

    bool leaf(bool strict) {
        if (!strict) {
            relaxed_found = true;
            return false;
        }
        if (cfg.check_all_circuits) {
            for (const auto& c : all_circuits)
                if (!ops.vanishes(walk_signed_edges(g, c), eps)) {
                    relaxed_found = true;
                    return false;
                }
        }
        return true;
    }

    bool assign(std::size_t idx, bool strict) {
        if (idx == cb.order.size()) return leaf(strict);
        const int w = cb.order[idx];
        const int p = cb.parent[w];
        if (++branches > cfg.max_branch) throw resource_limit("signing search budget exceeded");
        if (p < 0) {
            pot[w] = ops.root();
            return checks_then_descend(idx, strict);
        }
        const int e = cb.parent_edge[w];
        const int eta = g.edge(e).first == p ? +1 : -1;
        const int nsig = pinned_[idx] ? 1 : ops.sigma_count(e);
        for (int si = 0; si < nsig; ++si) {
            const int sigma = si == 0 ? +1 : -1;
            bool viable = true;
            for (const auto& [ci, coef] : through_[e]) {
                cyc_rem_[ci] -= std::abs(sh_[e]);
                cyc_known_[ci] += coef * sigma * sh_[e];
                if (closing_gap(ci) > cyc_rem_[ci] + margin_) viable = false;
            }
            if (viable) {
                pot[w] = ops.advance(pot[p], e, sigma);
                eps[e] = sigma * eta;
                if (checks_then_descend(idx, strict)) return true;
            }
            for (const auto& [ci, coef] : through_[e]) {
                cyc_rem_[ci] += std::abs(sh_[e]);
                cyc_known_[ci] -= coef * sigma * sh_[e];
            }
        }
        return false;
    }

    bool checks_then_descend(std::size_t idx, bool strict) {
        for (int e : triggers[idx]) {
            const auto [u, v] = g.edge(e);
            int ev = +1;
            const int level = ops.check(pot[u], pot[v], e, ev);
            if (level == 0) return false;
            if (level == 1) strict = false;
            eps[e] = ev;
        }
        return assign(idx + 1, strict);
    }
};

// ---- exact line potentials ----------------------------------------------

struct Ed1ExactOps {
    const EdgeAngles& d;
    Rational root() const { return Rational(0); }
    Rational advance(const Rational& p, int e, int sigma) const {
        return sigma > 0 ? Rational(p + d.lengths[e]) : Rational(p - d.lengths[e]);
    }
    int sigma_count(int e) const { return d.lengths[e] == 0 ? 1 : 2; }
    int check(const Rational& pu, const Rational& pv, int e, int& eps) const {
        const Rational diff = pv - pu;
        if (diff == d.lengths[e]) {
            eps = +1;
            return 2;
        }
        if (diff == -d.lengths[e]) {
            eps = -1;
            return 2;
        }
        return 0;
    }
    bool vanishes(const std::vector<SignedEdge>& steps, const std::vector<int>& eps) const {
        Rational acc(0);
        for (const auto& se : steps)
            acc += se.sign * eps[se.edge] > 0 ? d.lengths[se.edge] : -d.lengths[se.edge];
        return acc == 0;
    }
    double shadow(int e) const { return to_double(d.lengths[e]); }
    bool modular() const { return false; }
    double slack(const SigningConfig&) const { return 0.0; }
};

// ---- float line potentials ----------------------------------------------

struct Ed1FloatOps {
    const EdgeAngles& d;
    double tol;
    double root() const { return 0.0; }
    double advance(double p, int e, int sigma) const {
        return sigma > 0 ? p + d.values[e] : p - d.values[e];
    }
    int sigma_count(int e) const { return d.values[e] == 0.0 ? 1 : 2; }
    int check(double pu, double pv, int e, int& eps) const {
        const double diff = pv - pu;
        if (std::abs(diff - d.values[e]) <= tol) {
            eps = +1;
            return 2;
        }
        if (std::abs(diff + d.values[e]) <= tol) {
            eps = -1;
            return 2;
        }
        return 0;
    }
    bool vanishes(const std::vector<SignedEdge>& steps, const std::vector<int>& eps) const {
        double acc = 0;
        for (const auto& se : steps)
            acc += se.sign * eps[se.edge] > 0 ? d.values[se.edge] : -d.values[se.edge];
        return std::abs(acc) <= tol;
    }
    double shadow(int e) const { return std::abs(d.values[e]); }
    bool modular() const { return false; }
    double slack(const SigningConfig& cfg) const { return cfg.tol; }
};

// ---- exact circle potentials --------------------------------------------

struct Gd2ExactOps {
    const EdgeAngles& d;
    RationalRotation root() const { return RationalRotation(); }
    RationalRotation advance(const RationalRotation& p, int e, int sigma) const {
        return rot_compose(p, sigma > 0 ? d.rotations[e] : rot_inverse(d.rotations[e]));
    }
    int sigma_count(int e) const { return d.rotations[e].s == 0 ? 1 : 2; }
    int check(const RationalRotation& pu, const RationalRotation& pv, int e, int& eps) const {
        const RationalRotation delta = rot_compose(rot_inverse(pu), pv);
        if (delta == d.rotations[e]) {
            eps = +1;
            return 2;
        }
        if (delta == rot_inverse(d.rotations[e])) {
            eps = -1;
            return 2;
        }
        return 0;
    }
    bool vanishes(const std::vector<SignedEdge>& steps, const std::vector<int>& eps) const {
        RationalRotation acc;
        for (const auto& se : steps)
            acc = rot_compose(acc, se.sign * eps[se.edge] > 0 ? d.rotations[se.edge]
                                                              : rot_inverse(d.rotations[se.edge]));
        return acc.is_identity();
    }
    double shadow(int e) const { return rotation_angle(d.rotations[e]); }
    bool modular() const { return true; }
    double slack(const SigningConfig&) const { return 0.0; }
};

// ---- float circle potentials --------------------------------------------

struct Gd2FloatOps {
    const EdgeAngles& d;
    double tol;
    double relaxed;
    double root() const { return 0.0; }
    double advance(double p, int e, int sigma) const {
        return sigma > 0 ? p + d.values[e] : p - d.values[e];
    }
    int sigma_count(int e) const { return d.values[e] == 0.0 ? 1 : 2; }
    int check(double pu, double pv, int e, int& eps) const {
        const double rp = std::abs(std::remainder(pv - pu - d.values[e], 2.0 * M_PI));
        const double rm = std::abs(std::remainder(pv - pu + d.values[e], 2.0 * M_PI));
        if (rp <= tol) {
            eps = +1;
            return 2;
        }
        if (rm <= tol) {
            eps = -1;
            return 2;
        }
        if (rp <= relaxed) {
            eps = +1;
            return 1;
        }
        if (rm <= relaxed) {
            eps = -1;
            return 1;
        }
        return 0;
    }
    bool vanishes(const std::vector<SignedEdge>& steps, const std::vector<int>& eps) const {
        double acc = 0;
        for (const auto& se : steps)
            acc += se.sign * eps[se.edge] > 0 ? d.values[se.edge] : -d.values[se.edge];
        return std::abs(std::remainder(acc, 2.0 * M_PI)) <= tol;
    }
    double shadow(int e) const { return std::abs(d.values[e]); }
    bool modular() const { return true; }
    double slack(const SigningConfig&) const { return relaxed; }
};

} // namespace

Ed1Result decide_ed1(const Graph& g, const EdgeAngles& d, const SigningConfig& cfg) {
    validate_edge_angles(g, d);
    if (d.mode == EdgeAngles::Mode::ExactRotation)
        throw std::invalid_argument("line embedding needs lengths, not rotations");
    Ed1Result out;
    if (d.mode == EdgeAngles::Mode::ExactLength) {
        Ed1ExactOps ops{d};
        Searcher<Rational, Ed1ExactOps> s(g, ops, cfg);
        out.accepted = s.assign(0, true);
        out.branches = s.branches;
        if (out.accepted) {
            out.eps.sign = s.eps;
            out.witness.exact = true;
            out.witness.exact_f = s.pot;
            for (const auto& v : s.pot) out.witness.f.push_back(to_double(v));
        }
    } else {
        Ed1FloatOps ops{d, cfg.tol};
        Searcher<double, Ed1FloatOps> s(g, ops, cfg);
        out.accepted = s.assign(0, true);
        out.branches = s.branches;
        if (out.accepted) {
            out.eps.sign = s.eps;
            out.witness.f = s.pot;
        }
    }
    return out;
}

Gd2Result decide_gd2(const Graph& g, const EdgeAngles& d, const SigningConfig& cfg) {
    validate_edge_angles(g, d);
    Gd2Result out;
    if (d.mode == EdgeAngles::Mode::ExactRotation) {
        Gd2ExactOps ops{d};
        Searcher<RationalRotation, Gd2ExactOps> s(g, ops, cfg);
        out.accepted = s.assign(0, true);
        out.branches = s.branches;
        if (out.accepted) {
            out.eps.sign = s.eps;
            out.witness.exact = true;
            out.witness.exact_g = s.pot;
            for (const auto& r : s.pot) out.witness.theta.push_back(rotation_angle(r));
        }
        return out;
    }
    // exact lengths carry no exact trigonometry; decided as float angles
    EdgeAngles dd = d;
    if (d.mode == EdgeAngles::Mode::ExactLength) {
        dd.mode = EdgeAngles::Mode::Float;
        dd.values.clear();
        for (const auto& v : d.lengths) dd.values.push_back(to_double(v));
    }
    Gd2FloatOps ops{dd, cfg.tol, cfg.tol * cfg.ambiguity_factor};
    Searcher<double, Gd2FloatOps> s(g, ops, cfg);
    out.accepted = s.assign(0, true);
    out.branches = s.branches;
    if (out.accepted) {
        out.eps.sign = s.eps;
        out.witness.theta = s.pot;
    } else {
        out.ambiguous = s.relaxed_found;
    }
    return out;
}

bool check_small_total(const Graph& g, const EdgeAngles& d) {
    validate_edge_angles(g, d);
    // certified rational window around 2*pi
    static const Rational lo_2pi(6283185, 1000000);
    static const Rational hi_2pi(62831854, 10000000);
    switch (d.mode) {
        case EdgeAngles::Mode::ExactLength: {
            Rational sum(0);
            for (const auto& v : d.lengths) sum += v;
            return sum <= lo_2pi; // window and beyond: not certified
        }
        case EdgeAngles::Mode::ExactRotation: {
            double sum = 0;
            for (const auto& r : d.rotations) sum += rotation_angle(r);
            const double err = 1e-12 * (1.0 + static_cast<double>(d.rotations.size()));
            return sum + err <= to_double(lo_2pi);
        }
        default: {
            double sum = 0;
            for (double v : d.values) sum += v;
            return sum < 2.0 * M_PI;
        }
    }
}

} // namespace ellipt
