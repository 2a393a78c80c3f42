#include "ellipt/reductions.hpp"

#include "ellipt/errors.hpp"
#include "ellipt/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

namespace ellipt {

RationalRotation alpha_for_total(const BigInt& d) {
    if (d < 1) throw std::invalid_argument("total must be positive");
    const BigInt q = 16 * d * d + 1;
    return RationalRotation(Rational(16 * d * d - 1, q), Rational(8 * d, q));
}

bool alpha_premise_certified(const RationalRotation& alpha, const BigInt& d) {
    return alpha.c > 0 && alpha.s > 0 && Rational(2 * d) * alpha.s < 1;
}

namespace {

// Signed subset-sum: can the weights be split into two halves of equal sum?
bool partition_oracle(const std::vector<BigInt>& a) {
    BigInt total(0);
    for (const auto& w : a) {
        if (w < 0) throw std::invalid_argument("negative weight");
        total += w;
    }
    if (total > 1000000) throw resource_limit("oracle weight range too large");
    const long long t = total.convert_to<long long>();
    if (t % 2 != 0) return false;
    std::vector<char> reach(static_cast<std::size_t>(t) + 1, 0);
    reach[0] = 1;
    for (const auto& w : a) {
        const long long wi = w.convert_to<long long>();
        for (long long s = t - wi; s >= 0; --s)
            if (reach[s]) reach[s + wi] = 1;
    }
    return reach[static_cast<std::size_t>(t / 2)] != 0;
}

// Circuits need three nodes; shorter weight lists get zero-weight filler
// edges, which force coincident endpoints / identity rotations and leave
// the embedding question unchanged.
std::vector<BigInt> padded_weights(const std::vector<BigInt>& a) {
    std::vector<BigInt> w = a;
    while (w.size() < 3) w.emplace_back(0);
    return w;
}

} // namespace

ReductionInstance reduce_partition_to_ed1(const std::vector<BigInt>& a) {
    if (a.empty()) throw std::invalid_argument("empty weight list");
    for (const auto& w : a)
        if (w < 1) throw std::invalid_argument("weights must be positive");
    ReductionInstance inst;
    inst.kind = ReductionKind::PartitionEd1;
    inst.weights = a;
    const auto w = padded_weights(a);
    inst.graph = cycle_graph(static_cast<int>(w.size()));
    std::vector<Rational> lengths;
    for (const auto& v : w) lengths.emplace_back(v);
    inst.angles = EdgeAngles::from_lengths(std::move(lengths));
    for (const auto& v : a) inst.total += v;
    return inst;
}

ReductionInstance reduce_partition_to_gd2(const std::vector<BigInt>& a) {
    if (a.empty()) throw std::invalid_argument("empty weight list");
    for (const auto& w : a)
        if (w < 1) throw std::invalid_argument("weights must be positive");
    ReductionInstance inst;
    inst.kind = ReductionKind::PartitionGd2;
    inst.weights = a;
    for (const auto& v : a) inst.total += v;
    inst.alpha = alpha_for_total(inst.total);
    inst.has_alpha = true;
    const auto w = padded_weights(a);
    inst.graph = cycle_graph(static_cast<int>(w.size()));
    std::vector<RationalRotation> rot;
    for (const auto& v : w) rot.push_back(rot_power(inst.alpha, v.convert_to<long long>()));
    inst.angles = EdgeAngles::from_rotations(std::move(rot));
    return inst;
}

ReductionInstance reduce_saxe_to_gd2(const Graph& g, const std::vector<int>& d) {
    if (static_cast<int>(d.size()) != g.edge_count())
        throw dimension_mismatch("one weight per edge expected");
    ReductionInstance inst;
    inst.kind = ReductionKind::SaxeGd2;
    inst.source_graph = g;
    for (int w : d) {
        if (w != 1 && w != 2) throw bad_weights("weights must be 1 or 2");
        inst.weights.emplace_back(w);
        inst.total += w;
    }
    inst.alpha = alpha_for_total(inst.total);
    inst.has_alpha = true;
    inst.graph = g;
    std::vector<RationalRotation> rot;
    for (int w : d) rot.push_back(w == 1 ? inst.alpha : rot_power(inst.alpha, 2));
    inst.angles = EdgeAngles::from_rotations(std::move(rot));
    return inst;
}

ReductionInstance build_coloring_instance(const Graph& g, const Gadget& gadget, int k) {
    if (k < 3) throw std::invalid_argument("target dimension must be at least 3");
    const int gn = gadget.graph.node_count();
    if (gadget.t1 < 0 || gadget.t2 < 0 || gadget.t1 >= gn || gadget.t2 >= gn ||
        gadget.t1 == gadget.t2)
        throw std::invalid_argument("gadget terminals out of range");

    ReductionInstance inst;
    inst.kind = ReductionKind::ColoringGd3;
    inst.source_graph = g;
    inst.gadget = gadget;
    inst.target_k = k;

    const int n = g.node_count();
    std::set<std::pair<int, int>> edge_set(g.edges().begin(), g.edges().end());
    int next = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::vector<int> map(gn, -1);
            map[gadget.t1] = i;
            map[gadget.t2] = j;
            for (int v = 0; v < gn; ++v)
                if (map[v] < 0) map[v] = next++;
            for (const auto& [a, b] : gadget.graph.edges()) {
                int u = map[a], v = map[b];
                if (u > v) std::swap(u, v);
                edge_set.emplace(u, v);
            }
        }
    }
    inst.pre_suspension =
        Graph(next, std::vector<std::pair<int, int>>(edge_set.begin(), edge_set.end()));
    inst.graph = suspension(inst.pre_suspension, k - 3);
    inst.x.mode = PartialVector::Mode::Cosine;
    inst.x.values.assign(inst.graph.edge_count(), Rational(0));
    return inst;
}

ReductionInstance build_saxe_edk_instance(const Graph& h, int k) {
    if (k < 3) throw std::invalid_argument("target dimension must be at least 3");
    ReductionInstance inst;
    inst.kind = ReductionKind::SaxeEdk;
    inst.source_graph = h;
    inst.target_k = k;
    inst.graph = suspension(h, k - 2);
    const int apex = inst.graph.node_count() - 1;
    for (int e = 0; e < inst.graph.edge_count(); ++e) {
        const auto [u, v] = inst.graph.edge(e);
        inst.out_weights.emplace_back(u == apex || v == apex ? 1 : 2);
    }
    return inst;
}

ReductionInstance hat_lift(const Graph& g, const PartialVector& x, const EdgeAngles* rotations) {
    validate_partial_vector(g, x);
    if (x.mode != PartialVector::Mode::Cosine)
        throw std::invalid_argument("hat lift wants cosine mode");
    const bool exact_rot = rotations != nullptr;
    if (exact_rot) {
        if (rotations->mode != EdgeAngles::Mode::ExactRotation)
            throw std::invalid_argument("source rotations must be exact");
        if (rotations->size() != g.edge_count())
            throw dimension_mismatch("one rotation per edge expected");
        for (int e = 0; e < g.edge_count(); ++e)
            if (rotations->rotations[e].c != x.values[e])
                throw std::invalid_argument("rotation cosine disagrees with x");
    }

    ReductionInstance inst;
    inst.kind = ReductionKind::HatLift;
    inst.source_graph = g;
    inst.source_x = x;
    if (exact_rot) inst.source_angles = *rotations;

    const HatGraph hg = hat_graph(g);
    inst.graph = hg.graph;
    inst.triangles = hg.triangles;
    inst.x.mode = PartialVector::Mode::Cosine;
    inst.x.values = x.values;
    inst.x.values.resize(inst.graph.edge_count(), Rational(0));
    std::vector<RationalRotation> rot;
    if (exact_rot) rot = rotations->rotations;
    const int m = g.edge_count();
    for (int e = 0; e < m; ++e) {
        const Rational& v = x.values[e];
        Rational iv, jv;
        if (v == 0) {
            iv = Rational(4, 5);
            jv = Rational(3, 5);
            if (exact_rot) {
                rot.push_back(RationalRotation(Rational(4, 5), Rational(3, 5)));
                rot.push_back(RationalRotation(Rational(3, 5), Rational(4, 5)));
            }
        } else {
            iv = v;
            jv = 2 * v * v - 1;
            if (exact_rot) {
                rot.push_back(rotations->rotations[e]);
                rot.push_back(rot_power(rotations->rotations[e], 2));
            }
        }
        inst.x.values[m + 2 * e] = iv;
        inst.x.values[m + 2 * e + 1] = jv;

        SymmetricMatrix block(3);
        block.set(0, 1, v);
        block.set(0, 2, iv);
        block.set(1, 2, jv);
        for (int t = 0; t < 3; ++t) block.set(t, t, Rational(1));
        if (!extreme_point_e3(block).extreme)
            throw block_not_extreme("triangle block is not extreme at edge " + std::to_string(e));
    }
    if (exact_rot) inst.angles = EdgeAngles::from_rotations(std::move(rot));
    return inst;
}

namespace {

std::string yn(bool b) { return b ? "accept" : "reject"; }

VerifyReport verify_partition(const ReductionInstance& inst, const SigningConfig& cfg) {
    VerifyReport rep;
    rep.oracle_accepts = partition_oracle(inst.weights);
    if (inst.kind == ReductionKind::PartitionEd1) {
        rep.decider_accepts = decide_ed1(inst.graph, inst.angles, cfg).accepted;
        rep.agree = rep.decider_accepts == rep.oracle_accepts;
        rep.detail = "ed1 " + yn(rep.decider_accepts) + ", subset-sum " + yn(rep.oracle_accepts);
        return rep;
    }
    rep.decider_accepts = decide_gd2(inst.graph, inst.angles, cfg).accepted;
    const bool premise = inst.has_alpha && alpha_premise_certified(inst.alpha, inst.total);
    rep.agree = premise && rep.decider_accepts == rep.oracle_accepts;
    rep.detail = "gd2 " + yn(rep.decider_accepts) + ", subset-sum " + yn(rep.oracle_accepts) +
                 (premise ? "" : ", premise uncertified");
    return rep;
}

VerifyReport verify_saxe(const ReductionInstance& inst, const SigningConfig& cfg) {
    VerifyReport rep;
    std::vector<Rational> lengths;
    for (const auto& w : inst.weights) lengths.emplace_back(w);
    rep.oracle_accepts =
        decide_ed1(inst.source_graph, EdgeAngles::from_lengths(std::move(lengths)), cfg).accepted;
    rep.decider_accepts = decide_gd2(inst.graph, inst.angles, cfg).accepted;
    const bool premise = inst.has_alpha && alpha_premise_certified(inst.alpha, inst.total) &&
                         check_small_total(inst.graph, inst.angles);
    rep.agree = premise && rep.decider_accepts == rep.oracle_accepts;
    rep.detail = "gd2 " + yn(rep.decider_accepts) + ", ed1 " + yn(rep.oracle_accepts) +
                 (premise ? "" : ", premise uncertified");
    return rep;
}

VerifyReport verify_coloring(const ReductionInstance& inst, const SigningConfig& cfg,
                             std::uint64_t budget) {
    VerifyReport rep;
    const int chi_g = chromatic_number(inst.source_graph, budget).chi;
    const auto cw = coloring_witness(inst.pre_suspension, budget);
    const int chi_gp = cw.coloring.chi;
    rep.oracle_accepts = chi_g <= 3;
    rep.decider_accepts = chi_gp <= 3;

    bool ok = rep.oracle_accepts == rep.decider_accepts;
    // witness really is a completion of x = 0 on the augmented graph
    PartialVector zeros;
    zeros.values.assign(inst.pre_suspension.edge_count(), Rational(0));
    ok = ok && verify_witness(inst.pre_suspension, zeros, cw.witness).ok;
    // each apex adds exactly one to the chromatic number
    ok = ok && chromatic_number(inst.graph, budget).chi == chi_gp + (inst.target_k - 3);
    // rank-2 slice sanity: the circle decider at x = 0 accepts iff bipartite
    if (inst.pre_suspension.edge_count() > 0) {
        std::vector<RationalRotation> quarter(inst.pre_suspension.edge_count(),
                                              RationalRotation(Rational(0), Rational(1)));
        const bool gd2_zero =
            decide_gd2(inst.pre_suspension, EdgeAngles::from_rotations(std::move(quarter)), cfg)
                .accepted;
        ok = ok && gd2_zero == (chi_gp <= 2);
    }
    rep.agree = ok;
    rep.detail = "chi(G)=" + std::to_string(chi_g) + ", chi(G')=" + std::to_string(chi_gp);
    return rep;
}

VerifyReport verify_saxe_edk(const ReductionInstance& inst) {
    VerifyReport rep;
    const Graph base = suspension(inst.source_graph, inst.target_k - 3);
    PartialVector zeros;
    zeros.values.assign(base.edge_count(), Rational(0));
    const CovarianceImage ci = covariance_map(base, zeros);
    bool ok = ci.nabla.node_count() == inst.graph.node_count() &&
              ci.nabla.edges() == inst.graph.edges() &&
              ci.d.values.size() == inst.out_weights.size();
    if (ok)
        for (std::size_t e = 0; e < inst.out_weights.size(); ++e)
            ok = ok && ci.d.values[e] == Rational(inst.out_weights[e]);
    const int apex = inst.graph.node_count() - 1;
    for (int e = 0; ok && e < inst.graph.edge_count(); ++e) {
        const auto [u, v] = inst.graph.edge(e);
        ok = inst.out_weights[e] == ((u == apex || v == apex) ? 1 : 2);
    }
    rep.agree = rep.decider_accepts = rep.oracle_accepts = ok;
    rep.detail = ok ? "matches the covariance image" : "covariance image mismatch";
    return rep;
}

VerifyReport verify_hat(const ReductionInstance& inst, const SigningConfig& cfg) {
    VerifyReport rep;
    const int m = inst.source_graph.edge_count();
    bool ok = true;
    for (int e = 0; e < m; ++e) ok = ok && inst.x.values[e] == inst.source_x.values[e];
    for (const auto& [i, j, v] : inst.triangles) {
        SymmetricMatrix block(3);
        const int eij = inst.graph.edge_index(i, j);
        const int eiv = inst.graph.edge_index(std::min(i, v), std::max(i, v));
        const int ejv = inst.graph.edge_index(std::min(j, v), std::max(j, v));
        block.set(0, 1, inst.x.values[eij]);
        block.set(0, 2, inst.x.values[eiv]);
        block.set(1, 2, inst.x.values[ejv]);
        for (int t = 0; t < 3; ++t) block.set(t, t, Rational(1));
        ok = ok && extreme_point_e3(block).extreme;
    }
    if (inst.source_angles.size() == inst.source_graph.edge_count() &&
        inst.source_angles.mode == EdgeAngles::Mode::ExactRotation) {
        rep.oracle_accepts = decide_gd2(inst.source_graph, inst.source_angles, cfg).accepted;
        rep.decider_accepts = decide_gd2(inst.graph, inst.angles, cfg).accepted;
        ok = ok && rep.oracle_accepts == rep.decider_accepts;
        rep.detail = "gd2 source " + yn(rep.oracle_accepts) + ", lifted " +
                     yn(rep.decider_accepts);
    } else {
        rep.decider_accepts = rep.oracle_accepts = ok;
        rep.detail = "structural checks only (no source rotations)";
    }
    rep.agree = ok;
    return rep;
}

} // namespace

VerifyReport verify_reduction(const ReductionInstance& inst, const SigningConfig& cfg,
                              std::uint64_t budget) {
    switch (inst.kind) {
        case ReductionKind::PartitionEd1:
        case ReductionKind::PartitionGd2: return verify_partition(inst, cfg);
        case ReductionKind::SaxeGd2: return verify_saxe(inst, cfg);
        case ReductionKind::ColoringGd3: return verify_coloring(inst, cfg, budget);
        case ReductionKind::SaxeEdk: return verify_saxe_edk(inst);
        case ReductionKind::HatLift: return verify_hat(inst, cfg);
    }
    throw std::invalid_argument("unknown reduction kind");
}

std::vector<std::vector<BigInt>> enumerate_weight_multisets(int max_n, int max_sum) {
    std::vector<std::vector<BigInt>> out;
    std::vector<BigInt> cur;
    const auto rec = [&](auto&& self, int min_val, int left, int slots) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (slots == 0) return;
        for (int v = min_val; v <= left; ++v) {
            cur.emplace_back(v);
            self(self, v, left - v, slots - 1);
            cur.pop_back();
        }
    };
    rec(rec, 1, max_sum, max_n);
    return out;
}

namespace {

Graph random_connected(std::mt19937_64& rng, int n) {
    std::bernoulli_distribution flip(0.5);
    for (;;) {
        std::vector<std::pair<int, int>> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (flip(rng)) edges.emplace_back(u, v);
        Graph g(n, std::move(edges));
        if (g.component_count() == 1 && g.edge_count() > 0) return g;
    }
}

RationalRotation random_rotation(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> mq(1, 6);
    if (mq(rng) == 1) // exercise the x = 0 branch of the lift
        return RationalRotation(Rational(0), Rational(mq(rng) % 2 ? 1 : -1));
    const int q = mq(rng) + 1;
    std::uniform_int_distribution<int> pq(0, q - 1);
    const int p = pq(rng);
    const BigInt den = BigInt(q) * q + BigInt(p) * p;
    Rational c(BigInt(q) * q - BigInt(p) * p, den);
    Rational s(2 * BigInt(q) * p, den);
    if (mq(rng) % 2) c = -c;
    if (mq(rng) % 2) s = -s;
    return RationalRotation(c, s);
}

} // namespace

std::vector<ReductionInstance> random_saxe_corpus(int count, int max_n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nn(2, std::max(2, max_n));
    std::uniform_int_distribution<int> ww(1, 2);
    std::vector<ReductionInstance> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const Graph g = random_connected(rng, nn(rng));
        std::vector<int> d(g.edge_count());
        for (auto& w : d) w = ww(rng);
        out.push_back(reduce_saxe_to_gd2(g, d));
    }
    return out;
}

std::vector<ReductionInstance> random_hat_corpus(int count, int max_n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nn(3, std::max(3, max_n));
    std::vector<ReductionInstance> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const Graph g = random_connected(rng, nn(rng));
        std::vector<RationalRotation> rot(g.edge_count());
        PartialVector x;
        for (int e = 0; e < g.edge_count(); ++e) {
            rot[e] = random_rotation(rng);
            x.values.push_back(rot[e].c);
        }
        const EdgeAngles angles = EdgeAngles::from_rotations(std::move(rot));
        out.push_back(hat_lift(g, x, &angles));
    }
    return out;
}

SweepReport verify_many(const std::vector<ReductionInstance>& batch, const SigningConfig& cfg,
                        std::uint64_t budget, int jobs) {
    std::vector<VerifyReport> reports(batch.size());
    const int workers = std::max(1, jobs);
    if (workers == 1) {
        for (std::size_t i = 0; i < batch.size(); ++i)
            reports[i] = verify_reduction(batch[i], cfg, budget);
    } else {
        std::atomic<std::size_t> next(0);
        std::exception_ptr first_error;
        std::mutex err_mutex;
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= batch.size()) return;
                    try {
                        reports[i] = verify_reduction(batch[i], cfg, budget);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(err_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    SweepReport rep;
    rep.instances = batch.size();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i].agree) continue;
        ++rep.disagreements;
        if (rep.first_detail.empty())
            rep.first_detail = "instance " + std::to_string(i) + ": " + reports[i].detail;
    }
    return rep;
}

} // namespace ellipt
