#include "ellipt/completion.hpp"

#include "ellipt/errors.hpp"
#include "ellipt/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellipt {

namespace {

std::vector<double> to_float_vec(const std::vector<Rational>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& r : v) out.push_back(to_double(r));
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Solve M x = rhs for a nonsingular rational system (plain elimination with
// row pivoting). Used on Gram matrices of independent vector sets.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
    const int n = static_cast<int>(m.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (m[i][col] != 0) { piv = i; break; }
        if (piv < 0) throw std::invalid_argument("singular system");
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (int i = col + 1; i < n; ++i) {
            if (m[i][col] == 0) continue;
            const Rational f = m[i][col] / m[col][col];
            for (int j = col; j < n; ++j) m[i][j] -= f * m[col][j];
            rhs[i] -= f * rhs[col];
        }
    }
    std::vector<Rational> x(n, Rational(0));
    for (int i = n - 1; i >= 0; --i) {
        Rational acc = rhs[i];
        for (int j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return x;
}

Rational det_rational(std::vector<std::vector<Rational>> m) {
    const int n = static_cast<int>(m.size());
    Rational det(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (m[i][col] != 0) { piv = i; break; }
        if (piv < 0) return Rational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (int i = col + 1; i < n; ++i) {
            if (m[i][col] == 0) continue;
            const Rational f = m[i][col] / m[col][col];
            for (int j = col; j < n; ++j) m[i][j] -= f * m[col][j];
        }
    }
    return det;
}

// Vector orthogonal to k-1 independent rows in R^k (cofactor expansion);
// its squared norm equals the Gram determinant of the rows.
std::vector<Rational> generalized_cross(const std::vector<std::vector<Rational>>& rows, int k) {
    std::vector<Rational> c(k, Rational(0));
    for (int j = 0; j < k; ++j) {
        std::vector<std::vector<Rational>> sub;
        for (const auto& r : rows) {
            std::vector<Rational> row;
            for (int t = 0; t < k; ++t)
                if (t != j) row.push_back(r[t]);
            sub.push_back(std::move(row));
        }
        const Rational d = sub.empty() ? Rational(1) : det_rational(sub);
        c[j] = (j % 2 == 0) ? d : -d;
    }
    return c;
}

} // namespace

GramWitness witness_from_exact(int k, std::vector<std::vector<Rational>> vecs) {
    GramWitness w;
    w.k = k;
    w.exact = true;
    w.vectors.reserve(vecs.size());
    for (const auto& v : vecs) w.vectors.push_back(to_float_vec(v));
    w.exact_vectors = std::move(vecs);
    return w;
}

GramWitness witness_from_float(int k, std::vector<std::vector<double>> vecs) {
    GramWitness w;
    w.k = k;
    w.exact = false;
    w.vectors = std::move(vecs);
    return w;
}

GramWitness witness_from_circle(const CircleWitness& cw) {
    GramWitness w;
    w.k = 2;
    if (cw.exact) {
        w.exact = true;
        for (const auto& r : cw.exact_g) w.exact_vectors.push_back({r.c, r.s});
        for (const auto& r : cw.exact_g)
            w.vectors.push_back({to_double(r.c), to_double(r.s)});
    } else {
        for (double t : cw.theta) w.vectors.push_back({std::cos(t), std::sin(t)});
    }
    return w;
}

WitnessCheck verify_witness(const Graph& g, const PartialVector& x, const GramWitness& w,
                            double tol) {
    validate_partial_vector(g, x);
    if (x.mode != PartialVector::Mode::Cosine)
        throw std::invalid_argument("witness verification wants cosine mode");
    if (w.node_count() != g.node_count()) throw dimension_mismatch("witness size mismatch");
    if (w.exact) {
        for (const auto& v : w.exact_vectors)
            if (dot(v, v) != 1) return {false, 1.0};
        for (int e = 0; e < g.edge_count(); ++e) {
            const auto [u, v] = g.edge(e);
            if (dot(w.exact_vectors[u], w.exact_vectors[v]) != x.values[e]) return {false, 1.0};
        }
        return {true, 0.0};
    }
    double worst = 0;
    for (const auto& v : w.vectors) worst = std::max(worst, std::abs(dot(v, v) - 1.0));
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edge(e);
        worst = std::max(worst, std::abs(dot(w.vectors[u], w.vectors[v]) - to_double(x.values[e])));
    }
    return {worst <= tol, worst};
}

namespace {

std::vector<std::vector<Rational>> pad_exact(const GramWitness& w, int k) {
    auto vecs = w.exact_vectors;
    for (auto& v : vecs) v.resize(k, Rational(0));
    return vecs;
}

std::vector<std::vector<double>> pad_float(const GramWitness& w, int k) {
    auto vecs = w.vectors;
    for (auto& v : vecs) v.resize(k, 0.0);
    return vecs;
}

// Exact orthogonal alignment carrying the b-side onto the a-side: fixes
// shared vectors, extends isometrically. Returns false when the shared rank
// is one where no rational alignment is constructible (possible only for
// 2 <= rank <= k-2, so never at k <= 3).
bool align_exact(const std::vector<std::vector<Rational>>& shared_a,
                 const std::vector<std::vector<Rational>>& shared_b, int k,
                 const std::vector<std::vector<Rational>>& in,
                 std::vector<std::vector<Rational>>& out) {
    const int m = static_cast<int>(shared_a.size());
    // independent subset of the shared set via Gram elimination
    std::vector<int> basis;
    {
        std::vector<std::vector<Rational>> gram(m, std::vector<Rational>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) gram[i][j] = dot(shared_b[i], shared_b[j]);
        std::vector<std::vector<Rational>> work = gram;
        std::vector<bool> used(m, false);
        for (;;) {
            int piv = -1;
            for (int i = 0; i < m; ++i)
                if (!used[i] && work[i][i] != 0) { piv = i; break; }
            if (piv < 0) break;
            basis.push_back(piv);
            used[piv] = true;
            for (int i = 0; i < m; ++i) {
                if (used[i] || work[i][piv] == 0) continue;
                const Rational f = work[i][piv] / work[piv][piv];
                for (int j = 0; j < m; ++j) work[i][j] -= f * work[piv][j];
            }
            // zero the pivot column for the remaining rows
            for (int i = 0; i < m; ++i)
                if (!used[i]) work[i][piv] = Rational(0);
        }
    }
    const int r = static_cast<int>(basis.size());
    std::vector<std::vector<Rational>> ba, bb; // independent shared vectors
    for (int i : basis) {
        ba.push_back(shared_a[i]);
        bb.push_back(shared_b[i]);
    }

    const auto span_image = [&](const std::vector<Rational>& v) {
        // coefficients of the projection onto span(bb), pushed through to ba
        std::vector<std::vector<Rational>> gram(r, std::vector<Rational>(r));
        std::vector<Rational> rhs(r);
        for (int i = 0; i < r; ++i) {
            rhs[i] = dot(bb[i], v);
            for (int j = 0; j < r; ++j) gram[i][j] = dot(bb[i], bb[j]);
        }
        const auto lam = solve_linear(gram, rhs);
        std::vector<Rational> img(k, Rational(0));
        for (int i = 0; i < r; ++i)
            for (int t = 0; t < k; ++t) img[t] += lam[i] * ba[i][t];
        return img;
    };

    out.clear();
    if (r == 0) {
        out = in;
        return true;
    }
    if (r == k) {
        for (const auto& v : in) out.push_back(span_image(v));
        return true;
    }
    if (r == k - 1) {
        // one-dimensional complement: generalized cross on both sides; the
        // squared norms agree (both equal the shared Gram determinant)
        const auto ca = generalized_cross(ba, k);
        const auto cb = generalized_cross(bb, k);
        const Rational nn = dot(ca, ca);
        for (const auto& v : in) {
            auto img = span_image(v);
            const Rational t = dot(cb, v) / nn;
            for (int i = 0; i < k; ++i) img[i] += t * ca[i];
            out.push_back(std::move(img));
        }
        return true;
    }
    if (r == 1) {
        // unit shared vectors: reflect b1 -> e1 -> a1 through rational
        // Householder maps (identity when the vector already is e1)
        const auto householder_apply = [&](const std::vector<Rational>& unit,
                                           const std::vector<Rational>& v) {
            // H = I - 2 w w^T / (w.w), w = e1 - unit; H unit = e1, H e1 = unit
            std::vector<Rational> w = unit;
            for (auto& c : w) c = -c;
            w[0] += 1;
            const Rational ww = dot(w, w);
            if (ww == 0) return v; // unit == e1
            const Rational f = 2 * dot(w, v) / ww;
            std::vector<Rational> res = v;
            for (int i = 0; i < k; ++i) res[i] -= f * w[i];
            return res;
        };
        for (const auto& v : in) {
            const auto mid = householder_apply(bb[0], v); // b-frame -> e1-frame
            out.push_back(householder_apply(ba[0], mid)); // e1-frame -> a-frame
        }
        return true;
    }
    return false;
}

// Float alignment: orthonormal frames from the shared vectors extended by
// standard basis vectors, Q = F_a F_b^T.
std::vector<std::vector<double>> align_float(const std::vector<std::vector<double>>& shared_a,
                                             const std::vector<std::vector<double>>& shared_b,
                                             int k, const std::vector<std::vector<double>>& in) {
    const double dep_eps = 1e-8;
    const auto build_frame = [&](const std::vector<std::vector<double>>& lead) {
        std::vector<std::vector<double>> frame;
        const auto feed = [&](std::vector<double> v) {
            for (const auto& q : frame) {
                const double c = dot(q, v);
                for (int i = 0; i < k; ++i) v[i] -= c * q[i];
            }
            const double n2 = dot(v, v);
            if (n2 > dep_eps * dep_eps) {
                const double inv = 1.0 / std::sqrt(n2);
                for (auto& c : v) c *= inv;
                frame.push_back(std::move(v));
            }
        };
        for (const auto& v : lead) feed(v);
        for (int i = 0; i < k && static_cast<int>(frame.size()) < k; ++i) {
            std::vector<double> e(k, 0.0);
            e[i] = 1.0;
            feed(std::move(e));
        }
        return frame;
    };
    const auto fa = build_frame(shared_a);
    const auto fb = build_frame(shared_b);
    std::vector<std::vector<double>> out;
    out.reserve(in.size());
    for (const auto& v : in) {
        std::vector<double> img(k, 0.0);
        const std::size_t dims = std::min(fa.size(), fb.size());
        for (std::size_t t = 0; t < dims; ++t) {
            const double c = dot(fb[t], v);
            for (int i = 0; i < k; ++i) img[i] += c * fa[t][i];
        }
        out.push_back(std::move(img));
    }
    return out;
}

} // namespace

GluedWitness glue_clique_sum(const Graph& g1, const GramWitness& w1, const Graph& g2,
                             const GramWitness& w2,
                             const std::vector<std::pair<int, int>>& identify, double tol) {
    if (w1.node_count() != g1.node_count() || w2.node_count() != g2.node_count())
        throw dimension_mismatch("witness does not cover its graph");
    const int k = std::max(w1.k, w2.k);
    GluedWitness out;
    out.graph = clique_sum(g1, g2, identify, &out.g2_map);

    const bool exact = w1.exact && w2.exact;
    if (exact) {
        auto v1 = pad_exact(w1, k);
        auto v2 = pad_exact(w2, k);
        std::vector<std::vector<Rational>> sa, sb;
        for (const auto& [b, a] : identify) {
            sa.push_back(v1[a]);
            sb.push_back(v2[b]);
        }
        for (std::size_t i = 0; i < sa.size(); ++i)
            for (std::size_t j = i; j < sa.size(); ++j)
                if (dot(sa[i], sa[j]) != dot(sb[i], sb[j]))
                    throw shared_mismatch("shared Gram values disagree");
        std::vector<std::vector<Rational>> aligned;
        if (align_exact(sa, sb, k, v2, aligned)) {
            std::vector<std::vector<Rational>> merged(out.graph.node_count(),
                                                      std::vector<Rational>(k, Rational(0)));
            for (int i = 0; i < g1.node_count(); ++i) merged[i] = v1[i];
            for (int b = 0; b < g2.node_count(); ++b) merged[out.g2_map[b]] = aligned[b];
            for (const auto& [b, a] : identify) merged[a] = v1[a]; // identified keep the base copy
            out.witness = witness_from_exact(k, std::move(merged));
            return out;
        }
        // fall through to the float path when no rational alignment exists
    }

    auto v1 = pad_float(w1, k);
    auto v2 = pad_float(w2, k);
    std::vector<std::vector<double>> sa, sb;
    for (const auto& [b, a] : identify) {
        sa.push_back(v1[a]);
        sb.push_back(v2[b]);
    }
    for (std::size_t i = 0; i < sa.size(); ++i)
        for (std::size_t j = i; j < sa.size(); ++j)
            if (std::abs(dot(sa[i], sa[j]) - dot(sb[i], sb[j])) > tol)
                throw shared_mismatch("shared Gram values disagree beyond tolerance");
    auto aligned = align_float(sa, sb, k, v2);
    std::vector<std::vector<double>> merged(out.graph.node_count(), std::vector<double>(k, 0.0));
    for (int i = 0; i < g1.node_count(); ++i) merged[i] = v1[i];
    for (int b = 0; b < g2.node_count(); ++b) merged[out.g2_map[b]] = aligned[b];
    for (const auto& [b, a] : identify) merged[a] = v1[a];
    out.witness = witness_from_float(k, std::move(merged));
    return out;
}

namespace {

// Rank <= 3 block for one triangle with pi-unit edge values (t01, t12, t02).
std::vector<std::vector<double>> triangle_block(double t01, double t12, double t02) {
    const double c01 = std::cos(M_PI * t01);
    const double c12 = std::cos(M_PI * t12);
    const double c02 = std::cos(M_PI * t02);
    const double s01 = std::sin(M_PI * t01);
    std::vector<std::vector<double>> v(3, std::vector<double>(3, 0.0));
    v[0] = {1.0, 0.0, 0.0};
    v[1] = {c01, s01, 0.0};
    double y = 0.0;
    if (s01 > 1e-12) y = (c12 - c01 * c02) / s01;
    const double z2 = 1.0 - c02 * c02 - y * y;
    v[2] = {c02, y, std::sqrt(std::max(0.0, z2))};
    return v;
}

// Largest odd-subset gain of (2a - 1) over a list of values.
double max_odd_gain(const std::vector<double>& vals) {
    double gain = 0.0;
    int count = 0;
    double flip = 1e300;
    for (double a : vals) {
        const double g = 2.0 * a - 1.0;
        if (g > 0) {
            gain += g;
            ++count;
        }
        flip = std::min(flip, std::abs(g));
    }
    if (count % 2 == 0) gain -= flip;
    return gain;
}

// Smallest even-subset gain of (1 - 2a) over a list of values.
double min_even_gain(const std::vector<double>& vals) {
    double gain = 0.0;
    int count = 0;
    double flip = 1e300;
    for (double a : vals) {
        const double g = 1.0 - 2.0 * a;
        if (g < 0) {
            gain += g;
            ++count;
        }
        flip = std::min(flip, std::abs(g));
    }
    if (count % 2 == 1) gain += flip;
    return gain;
}

} // namespace

GramWitness complete_circuit(int n, const AngleVector& a, double tol) {
    if (n < 3) throw std::invalid_argument("circuit needs n >= 3");
    if (static_cast<int>(a.a.size()) != n) throw dimension_mismatch("need one angle per edge");
    {
        // membership guard on the single cycle inequality family
        const Graph g = cycle_graph(n);
        Walk c;
        for (int i = 0; i < n; ++i) c.nodes.push_back(i);
        c.nodes.push_back(0);
        double worst = worst_odd_set(g, c, a).second;
        for (double v : a.a) worst = std::max({worst, -v, v - 1.0});
        if (worst > tol) throw not_in_elliptope("circuit instance outside the elliptope");
    }
    // chords ch[j] = value on (0, j); ch[1] and ch[n-1] are circuit edges
    std::vector<double> ch(n, 0.0);
    ch[1] = a.a[0];
    ch[n - 1] = a.a[n - 1];
    for (int j = 2; j <= n - 2; ++j) {
        const double tp = ch[j - 1], ep = a.a[j - 1];
        double lo = std::max(0.0, std::abs(tp - ep));
        double hi = std::min({1.0, tp + ep, 2.0 - tp - ep});
        std::vector<double> path;
        double path_sum = 0.0;
        for (int e = j; e <= n - 1; ++e) {
            path.push_back(a.a[e]);
            path_sum += a.a[e];
        }
        lo = std::max(lo, max_odd_gain(path) - path_sum + 1.0);
        hi = std::min(hi, path_sum + min_even_gain(path));
        if (lo > hi + tol) throw not_in_elliptope("chord interval emptied out");
        ch[j] = 0.5 * (lo + hi);
    }

    const auto tri_graph = complete_graph(3);
    auto block = [&](int j) { // triangle (0, j, j+1)
        return witness_from_float(3, triangle_block(ch[j], a.a[j], ch[j + 1]));
    };
    if (n == 3) {
        auto w = witness_from_float(3, triangle_block(a.a[0], a.a[1], a.a[2]));
        return w;
    }
    Graph cur = tri_graph;
    GramWitness wit = block(1);
    for (int j = 2; j <= n - 2; ++j) {
        auto glued = glue_clique_sum(cur, wit, tri_graph, block(j), {{0, 0}, {1, j}},
                                     std::max(tol, 1e-7));
        cur = std::move(glued.graph);
        wit = std::move(glued.witness);
    }
    return wit;
}

GramWitness complete_circuit(int n, const PartialVector& x, double tol) {
    const Graph g = cycle_graph(n);
    return complete_circuit(n, angles_from_cosines(g, x), tol);
}

WitnessCheck verify_circuit_witness(int n, const AngleVector& a, const GramWitness& w,
                                    double tol) {
    const Graph g = cycle_graph(n);
    if (w.node_count() != n) throw dimension_mismatch("witness size mismatch");
    if (static_cast<int>(a.a.size()) != n) throw dimension_mismatch("need one angle per edge");
    double worst = 0;
    for (const auto& v : w.vectors) worst = std::max(worst, std::abs(dot(v, v) - 1.0));
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edge(e);
        worst = std::max(worst,
                         std::abs(dot(w.vectors[u], w.vectors[v]) - std::cos(M_PI * a.a[e])));
    }
    return {worst <= tol, worst};
}

namespace {

struct Interval {
    double lo, hi;
};

Interval series(const Interval& a, const Interval& b) {
    Interval out;
    out.lo = std::max({0.0, a.lo - b.hi, b.lo - a.hi});
    const double s = std::clamp(1.0, a.lo + b.lo, a.hi + b.hi);
    out.hi = std::min(s, 2.0 - s);
    return out;
}

Interval intersect(const Interval& a, const Interval& b, double slack) {
    Interval out{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (out.lo > out.hi) {
        if (out.lo - out.hi > slack) throw not_in_elliptope("parallel intervals do not meet");
        out.lo = out.hi = 0.5 * (out.lo + out.hi);
    }
    return out;
}

struct RedStep {
    enum class Kind { Isolated, Leaf, SuppressLoop, Suppress };
    Kind kind;
    int w = -1, u = -1, v = -1;
    Interval iu{0, 0}, iv{0, 0};
};

struct REdge {
    int u, v;
    Interval iv;
    bool alive = true;
};

std::vector<double> unit_at_angle_from(const std::vector<double>& base, double frac) {
    // any unit vector at spherical distance pi*frac from base
    std::vector<double> q(3, 0.0);
    int pick = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(base[i]) < std::abs(base[pick])) pick = i;
    q[pick] = 1.0;
    const double c = dot(q, base);
    for (int i = 0; i < 3; ++i) q[i] -= c * base[i];
    const double inv = 1.0 / std::sqrt(dot(q, q));
    for (auto& t : q) t *= inv;
    std::vector<double> out(3);
    for (int i = 0; i < 3; ++i)
        out[i] = std::cos(M_PI * frac) * base[i] + std::sin(M_PI * frac) * q[i];
    return out;
}

} // namespace

GramWitness complete_k4free(const Graph& g, const PartialVector& x, double tol) {
    validate_partial_vector(g, x);
    if (x.mode != PartialVector::Mode::Cosine)
        throw std::invalid_argument("completion wants cosine mode");
    const AngleVector ax = angles_from_cosines(g, x);
    const double slack = std::max(tol * 100.0, 1e-12);
    const int n = g.node_count();

    std::vector<REdge> edges;
    std::vector<std::vector<int>> inc(n);
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edge(e);
        edges.push_back({u, v, {ax.a[e], ax.a[e]}, true});
        inc[u].push_back(e);
        inc[v].push_back(e);
    }
    std::vector<char> alive(n, 1);
    const auto degree_of = [&](int u) {
        int d = 0;
        for (int e : inc[u])
            if (edges[e].alive) ++d;
        return d;
    };
    const auto other_end = [&](int e, int u) { return edges[e].u == u ? edges[e].v : edges[e].u; };
    const auto add_edge = [&](int u, int v, Interval iv) {
        edges.push_back({u, v, iv, true});
        const int id = static_cast<int>(edges.size()) - 1;
        inc[u].push_back(id);
        inc[v].push_back(id);
    };

    std::vector<RedStep> steps;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int w = 0; w < n && !changed; ++w) {
            if (!alive[w]) continue;
            // merge parallel edges touching w
            for (std::size_t i = 0; i < inc[w].size() && !changed; ++i) {
                const int e1 = inc[w][i];
                if (!edges[e1].alive) continue;
                for (std::size_t j = i + 1; j < inc[w].size(); ++j) {
                    const int e2 = inc[w][j];
                    if (!edges[e2].alive || other_end(e2, w) != other_end(e1, w)) continue;
                    edges[e1].iv = intersect(edges[e1].iv, edges[e2].iv, slack);
                    edges[e2].alive = false;
                    changed = true;
                    break;
                }
            }
            if (changed) break;
            const int deg = degree_of(w);
            if (deg == 0) {
                steps.push_back({RedStep::Kind::Isolated, w});
                alive[w] = 0;
                changed = true;
            } else if (deg == 1) {
                int e = -1;
                for (int id : inc[w])
                    if (edges[id].alive) e = id;
                steps.push_back({RedStep::Kind::Leaf, w, other_end(e, w), -1, edges[e].iv});
                edges[e].alive = false;
                alive[w] = 0;
                changed = true;
            } else if (deg == 2) {
                int e1 = -1, e2 = -1;
                for (int id : inc[w])
                    if (edges[id].alive) (e1 < 0 ? e1 : e2) = id;
                const int u = other_end(e1, w), v = other_end(e2, w);
                if (u == v) {
                    intersect(edges[e1].iv, edges[e2].iv, slack); // feasibility check
                    steps.push_back(
                        {RedStep::Kind::SuppressLoop, w, u, u, edges[e1].iv, edges[e2].iv});
                } else {
                    steps.push_back({RedStep::Kind::Suppress, w, u, v, edges[e1].iv, edges[e2].iv});
                    add_edge(u, v, series(edges[e1].iv, edges[e2].iv));
                }
                edges[e1].alive = false;
                edges[e2].alive = false;
                alive[w] = 0;
                changed = true;
            }
        }
    }
    for (const auto& e : edges)
        if (e.alive) throw not_k4_minor_free("graph has a K4 minor");

    // replay backwards, placing one point per step
    std::vector<std::vector<double>> pos(n);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const RedStep& st = *it;
        switch (st.kind) {
            case RedStep::Kind::Isolated:
                pos[st.w] = {1.0, 0.0, 0.0};
                break;
            case RedStep::Kind::Leaf:
                pos[st.w] = unit_at_angle_from(pos[st.u], 0.5 * (st.iu.lo + st.iu.hi));
                break;
            case RedStep::Kind::SuppressLoop: {
                const Interval both = intersect(st.iu, st.iv, slack);
                pos[st.w] = unit_at_angle_from(pos[st.u], 0.5 * (both.lo + both.hi));
                break;
            }
            case RedStep::Kind::Suppress: {
                const auto& pu = pos[st.u];
                const auto& pv = pos[st.v];
                const double c = std::clamp(dot(pu, pv), -1.0, 1.0);
                const double t = std::acos(c) / M_PI;
                double plo = std::max({st.iu.lo, t - st.iv.hi, st.iv.lo - t, 0.0});
                double phi = std::min({st.iu.hi, t + st.iv.hi, 2.0 - t - st.iv.lo, 1.0});
                if (plo > phi) {
                    if (plo - phi > slack) throw not_in_elliptope("placement interval emptied out");
                    plo = phi = 0.5 * (plo + phi);
                }
                const double p = 0.5 * (plo + phi);
                double qlo = std::max({st.iv.lo, t - p, p - t, 0.0});
                double qhi = std::min({st.iv.hi, 2.0 - t - p, p + t, 1.0});
                if (qlo > qhi) {
                    if (qlo - qhi > slack) throw not_in_elliptope("placement interval emptied out");
                    qlo = qhi = 0.5 * (qlo + qhi);
                }
                const double q = 0.5 * (qlo + qhi);
                std::vector<double> nrm = {pu[1] * pv[2] - pu[2] * pv[1],
                                           pu[2] * pv[0] - pu[0] * pv[2],
                                           pu[0] * pv[1] - pu[1] * pv[0]};
                const double nn2 = dot(nrm, nrm);
                if (nn2 < 1e-30) {
                    // u, v parallel to machine precision: the angle to v is
                    // pinned by the angle to u up to < 1e-15 either way
                    pos[st.w] = unit_at_angle_from(pu, p);
                    break;
                }
                // re-orthogonalise against pu: a tiny raw cross product
                // carries O(eps / |nrm|) of pu, which would leak straight
                // into the placed cosines once normalised
                const double cu = dot(nrm, pu);
                for (int i = 0; i < 3; ++i) nrm[i] -= cu * pu[i];
                const double ninv = 1.0 / std::sqrt(dot(nrm, nrm));
                for (auto& s : nrm) s *= ninv;
                const double den = 1.0 - c * c;
                if (den < 1e-9) {
                    // nearly parallel u, v: the two angle constraints are
                    // redundant up to the deviation angle, and keeping w
                    // orthogonal to the deviation makes its effect on both
                    // cosines quadratic instead of linear
                    std::vector<double> w3(3);
                    for (int i = 0; i < 3; ++i)
                        w3[i] = std::cos(M_PI * p) * pu[i] + std::sin(M_PI * p) * nrm[i];
                    pos[st.w] = std::move(w3);
                    break;
                }
                const double cp = std::cos(M_PI * p), cq = std::cos(M_PI * q);
                const double A = (cp - c * cq) / den, B = (cq - c * cp) / den;
                const double z2 = 1.0 - (A * A + B * B + 2.0 * A * B * c);
                const double z = std::sqrt(std::max(0.0, z2));
                std::vector<double> w3(3);
                for (int i = 0; i < 3; ++i) w3[i] = A * pu[i] + B * pv[i] + z * nrm[i];
                pos[st.w] = std::move(w3);
                break;
            }
        }
    }
    return witness_from_float(3, std::move(pos));
}

namespace {

bool try_color(const Graph& g, int k, std::vector<int>& color, std::uint64_t& budget) {
    const int n = g.node_count();
    int colored = 0;
    std::vector<int> order;
    // saturation-ordered backtracking
    struct Frame {
        int node;
        int next_color;
        int max_used;
    };
    std::vector<Frame> stack;
    int max_used = 0;

    const auto pick_node = [&]() {
        int best = -1, best_sat = -1, best_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (color[v] >= 0) continue;
            int sat = 0;
            unsigned long long seen = 0;
            for (int u : g.neighbors(v))
                if (color[u] >= 0 && !(seen & (1ULL << color[u]))) {
                    seen |= 1ULL << color[u];
                    ++sat;
                }
            const int deg = g.degree(v);
            if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                best = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        return best;
    };
    const auto fits = [&](int v, int c) {
        for (int u : g.neighbors(v))
            if (color[u] == c) return false;
        return true;
    };

    stack.push_back({pick_node(), 0, 0});
    while (!stack.empty()) {
        if (budget-- == 0) throw resource_limit("coloring budget exceeded");
        Frame& f = stack.back();
        if (f.node < 0) return true; // nothing left to color
        const int cap = std::min(k - 1, f.max_used); // at most one brand-new color
        bool advanced = false;
        for (int c = f.next_color; c <= cap; ++c) {
            if (!fits(f.node, c)) continue;
            f.next_color = c + 1;
            color[f.node] = c;
            ++colored;
            const int nu = std::max(f.max_used, c + 1);
            if (colored == n) return true;
            stack.push_back({pick_node(), 0, nu});
            advanced = true;
            break;
        }
        if (!advanced) {
            stack.pop_back();
            if (!stack.empty()) {
                color[stack.back().node] = -1;
                --colored;
            }
        }
    }
    return false;
}

} // namespace

Coloring chromatic_number(const Graph& g, std::uint64_t budget) {
    const int n = g.node_count();
    if (n == 0) return {0, {}};
    // greedy clique for a lower bound
    std::vector<int> by_deg(n);
    for (int i = 0; i < n; ++i) by_deg[i] = i;
    std::sort(by_deg.begin(), by_deg.end(),
              [&](int a, int b) { return g.degree(a) > g.degree(b); });
    std::vector<int> clique;
    for (int v : by_deg) {
        bool ok = true;
        for (int u : clique)
            if (!g.has_edge(u, v)) ok = false;
        if (ok) clique.push_back(v);
    }
    const int lb = std::max<int>(1, static_cast<int>(clique.size()));
    for (int k = lb; k <= n; ++k) {
        std::vector<int> color(n, -1);
        if (try_color(g, k, color, budget)) return {k, std::move(color)};
    }
    throw error("coloring search fell through"); // unreachable: k = n always fits
}

ColoringWitness coloring_witness(const Graph& g, std::uint64_t budget) {
    ColoringWitness out;
    out.coloring = chromatic_number(g, budget);
    const int k = std::max(1, out.coloring.chi);
    std::vector<std::vector<Rational>> vecs;
    for (int v = 0; v < g.node_count(); ++v) {
        std::vector<Rational> e(k, Rational(0));
        e[out.coloring.color[v]] = 1;
        vecs.push_back(std::move(e));
    }
    out.witness = witness_from_exact(k, std::move(vecs));
    return out;
}

CovarianceImage covariance_map(const Graph& g, const PartialVector& x,
                               const std::vector<Rational>* diag) {
    validate_partial_vector(g, x);
    if (x.mode != PartialVector::Mode::Cosine)
        throw std::invalid_argument("covariance map wants cosine mode");
    std::vector<Rational> dg(g.node_count(), Rational(1));
    if (diag) {
        if (static_cast<int>(diag->size()) != g.node_count())
            throw dimension_mismatch("diagonal length mismatch");
        dg = *diag;
    }
    CovarianceImage ci;
    ci.nabla = suspension(g, 1);
    ci.apex = g.node_count();
    ci.d.mode = PartialVector::Mode::Distance;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [i, j] = g.edge(e);
        ci.d.values.push_back(dg[i] + dg[j] - 2 * x.values[e]);
    }
    for (int i = 0; i < g.node_count(); ++i) ci.d.values.push_back(dg[i]);
    validate_partial_vector(ci.nabla, ci.d);
    return ci;
}

EuclideanPointSet witness_transport(const Graph& g, const GramWitness& w) {
    if (w.node_count() != g.node_count()) throw dimension_mismatch("witness size mismatch");
    EuclideanPointSet out;
    out.dim = w.k;
    out.exact = w.exact;
    if (w.exact) {
        out.exact_points = w.exact_vectors;
        out.exact_points.emplace_back(w.k, Rational(0)); // apex at the origin
        for (const auto& p : out.exact_points) out.points.push_back(to_float_vec(p));
    } else {
        out.points = w.vectors;
        out.points.emplace_back(w.k, 0.0);
    }
    return out;
}

WitnessCheck verify_transport(const CovarianceImage& ci, const EuclideanPointSet& pts,
                              double tol) {
    if (static_cast<int>(pts.points.size()) != ci.nabla.node_count())
        throw dimension_mismatch("point count mismatch");
    if (pts.exact && !ci.d.values.empty()) {
        for (int e = 0; e < ci.nabla.edge_count(); ++e) {
            const auto [u, v] = ci.nabla.edge(e);
            Rational d2(0);
            for (int i = 0; i < pts.dim; ++i) {
                const Rational diff = pts.exact_points[u][i] - pts.exact_points[v][i];
                d2 += diff * diff;
            }
            if (d2 != ci.d.values[e]) return {false, 1.0};
        }
        return {true, 0.0};
    }
    double worst = 0;
    for (int e = 0; e < ci.nabla.edge_count(); ++e) {
        const auto [u, v] = ci.nabla.edge(e);
        double d2 = 0;
        for (int i = 0; i < pts.dim; ++i) {
            const double diff = pts.points[u][i] - pts.points[v][i];
            d2 += diff * diff;
        }
        worst = std::max(worst, std::abs(d2 - to_double(ci.d.values[e])));
    }
    return {worst <= tol, worst};
}

} // namespace ellipt
