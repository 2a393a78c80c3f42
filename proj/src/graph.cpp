#include "ellipt/graph.hpp"

#include "ellipt/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace ellipt {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw std::invalid_argument("negative node count");
    adj_.resize(n_);
    inc_.resize(n_);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const auto [u, v] = edges_[e];
        if (u < 0 || v >= n_ || u >= v)
            throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                        ") violates 0 <= u < v < n");
        if (!index_.emplace(std::make_pair(u, v), e).second)
            throw std::invalid_argument("duplicate edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ")");
        adj_[u].push_back(v);
        adj_[v].push_back(u);
        inc_[u].emplace_back(v, e);
        inc_[v].emplace_back(u, e);
    }
    for (int u = 0; u < n_; ++u) {
        std::sort(adj_[u].begin(), adj_[u].end());
        std::sort(inc_[u].begin(), inc_[u].end());
    }
}

int Graph::edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    const auto it = index_.find(std::make_pair(u, v));
    return it == index_.end() ? -1 : it->second;
}

std::vector<int> Graph::component_ids() const {
    std::vector<int> comp(n_, -1);
    int next = 0;
    for (int s = 0; s < n_; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        std::deque<int> q{s};
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            for (int v : adj_[u])
                if (comp[v] < 0) {
                    comp[v] = next;
                    q.push_back(v);
                }
        }
        ++next;
    }
    return comp;
}

int Graph::component_count() const {
    const auto ids = component_ids();
    return ids.empty() ? 0 : 1 + *std::max_element(ids.begin(), ids.end());
}

std::vector<SignedEdge> walk_signed_edges(const Graph& g, const Walk& w) {
    std::vector<SignedEdge> out;
    for (std::size_t i = 0; i + 1 < w.nodes.size(); ++i) {
        const int a = w.nodes[i], b = w.nodes[i + 1];
        const int e = g.edge_index(a, b);
        if (e < 0)
            throw std::invalid_argument("walk step (" + std::to_string(a) + "," +
                                        std::to_string(b) + ") is not an edge");
        out.push_back({e, g.edge(e).first == a ? +1 : -1});
    }
    return out;
}

CycleBasis fundamental_cycles(const Graph& g) {
    const int n = g.node_count();
    CycleBasis cb;
    cb.parent.assign(n, -1);
    cb.parent_edge.assign(n, -1);
    cb.depth.assign(n, 0);
    std::vector<char> seen(n, 0);
    std::vector<char> edge_in_tree(g.edge_count(), 0);

    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        cb.order.push_back(s);
        std::deque<int> q{s};
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            for (const auto& [v, e] : g.incident(u)) {
                if (seen[v]) continue;
                seen[v] = 1;
                cb.parent[v] = u;
                cb.parent_edge[v] = e;
                cb.depth[v] = cb.depth[u] + 1;
                cb.order.push_back(v);
                cb.tree_edges.push_back(e);
                edge_in_tree[e] = 1;
                q.push_back(v);
            }
        }
    }

    for (int e = 0; e < g.edge_count(); ++e) {
        if (edge_in_tree[e]) continue;
        cb.non_tree_edges.push_back(e);
        // cycle: u -e-> v, then the tree path from v back to u
        auto [u, v] = g.edge(e);
        std::vector<int> up_v, up_u;
        int a = v, b = u;
        while (cb.depth[a] > cb.depth[b]) {
            up_v.push_back(a);
            a = cb.parent[a];
        }
        while (cb.depth[b] > cb.depth[a]) {
            up_u.push_back(b);
            b = cb.parent[b];
        }
        while (a != b) {
            up_v.push_back(a);
            up_u.push_back(b);
            a = cb.parent[a];
            b = cb.parent[b];
        }
        Walk w;
        w.nodes.push_back(u);
        for (int x : up_v) w.nodes.push_back(x);
        w.nodes.push_back(a); // the meeting node (may equal u or v)
        for (auto it = up_u.rbegin(); it != up_u.rend(); ++it) w.nodes.push_back(*it);
        if (w.nodes.back() != u) w.nodes.push_back(u);
        // strip the duplicate when the meet node already closed the walk
        while (w.nodes.size() >= 2 && w.nodes[w.nodes.size() - 1] == w.nodes[w.nodes.size() - 2])
            w.nodes.pop_back();
        cb.cycles.push_back(std::move(w));
    }
    return cb;
}

Graph suspension(const Graph& g, int p) {
    if (p < 0) throw std::invalid_argument("negative apex count");
    const int n = g.node_count();
    auto edges = g.edges();
    for (int a = n; a < n + p; ++a)
        for (int v = 0; v < a; ++v) edges.emplace_back(v, a);
    return Graph(n + p, std::move(edges));
}

Graph clique_sum(const Graph& g1, const Graph& g2,
                 const std::vector<std::pair<int, int>>& identify, std::vector<int>* g2_map) {
    std::vector<int> map2(g2.node_count(), -1);
    std::set<int> used1;
    for (const auto& [b, a] : identify) {
        if (b < 0 || b >= g2.node_count() || a < 0 || a >= g1.node_count())
            throw std::invalid_argument("identification out of range");
        if (map2[b] >= 0 || !used1.insert(a).second)
            throw std::invalid_argument("identification is not injective");
        map2[b] = a;
    }
    for (std::size_t i = 0; i < identify.size(); ++i)
        for (std::size_t j = i + 1; j < identify.size(); ++j) {
            if (!g2.has_edge(identify[i].first, identify[j].first))
                throw not_a_clique("identified nodes not a clique in the attached graph");
            if (!g1.has_edge(identify[i].second, identify[j].second))
                throw not_a_clique("identified nodes not a clique in the base graph");
        }
    int next = g1.node_count();
    for (int b = 0; b < g2.node_count(); ++b)
        if (map2[b] < 0) map2[b] = next++;
    auto edges = g1.edges();
    std::set<std::pair<int, int>> have(edges.begin(), edges.end());
    for (const auto& [x, y] : g2.edges()) {
        int u = map2[x], v = map2[y];
        if (u > v) std::swap(u, v);
        if (have.insert(std::make_pair(u, v)).second) edges.emplace_back(u, v);
    }
    if (g2_map) *g2_map = map2;
    return Graph(next, std::move(edges));
}

HatGraph hat_graph(const Graph& g) {
    const int n = g.node_count();
    auto edges = g.edges();
    HatGraph out;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [i, j] = g.edge(e);
        const int v = n + e;
        edges.emplace_back(i, v);
        edges.emplace_back(j, v);
        out.triangles.push_back({i, j, v});
    }
    out.graph = Graph(n + g.edge_count(), std::move(edges));
    return out;
}

bool is_k4_minor_free(const Graph& g) {
    const int n = g.node_count();
    // multiplicity matrix; reductions may create parallel edges
    std::vector<std::vector<int>> mult(n, std::vector<int>(n, 0));
    std::vector<char> alive(n, 1);
    std::vector<int> deg(n, 0);
    for (const auto& [u, v] : g.edges()) {
        mult[u][v] = mult[v][u] = 1;
        ++deg[u];
        ++deg[v];
    }
    const auto kill_edge = [&](int u, int v, int k) {
        mult[u][v] -= k;
        mult[v][u] -= k;
        deg[u] -= k;
        deg[v] -= k;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < n && !changed; ++x) {
            if (!alive[x]) continue;
            if (deg[x] == 0) {
                alive[x] = 0;
                changed = true;
                continue;
            }
            // collapse parallel edges at x first
            for (int y = 0; y < n; ++y)
                if (mult[x][y] > 1) {
                    kill_edge(x, y, mult[x][y] - 1);
                    changed = true;
                }
            if (changed) break;
            if (deg[x] == 1) {
                for (int y = 0; y < n; ++y)
                    if (mult[x][y]) kill_edge(x, y, mult[x][y]);
                alive[x] = 0;
                changed = true;
            } else if (deg[x] == 2) {
                int u = -1, v = -1;
                for (int y = 0; y < n; ++y)
                    if (mult[x][y]) (u < 0 ? u : v) = y;
                if (v < 0) v = u; // both edge slots on the same neighbor
                kill_edge(x, u, mult[x][u]);
                if (mult[x][v]) kill_edge(x, v, mult[x][v]);
                alive[x] = 0;
                if (u != v) { // suppressing onto the same node would be a self-loop; drop it
                    mult[u][v] += 1;
                    mult[v][u] += 1;
                    ++deg[u];
                    ++deg[v];
                }
                changed = true;
            }
        }
    }
    for (int x = 0; x < n; ++x)
        if (alive[x] && deg[x] > 0) return false;
    return true;
}

namespace {

void circuit_dfs(const Graph& g, int start, std::vector<int>& path, std::vector<char>& on_path,
                 int max_len, std::size_t cap, std::vector<Walk>& out) {
    const int u = path.back();
    for (int v : g.neighbors(u)) {
        if (v == start && path.size() >= 3) {
            // reflection canon: second node smaller than the last
            if (path[1] < path.back()) {
                if (out.size() >= cap) throw resource_limit("circuit enumeration cap exceeded");
                Walk w;
                w.nodes = path;
                w.nodes.push_back(start);
                out.push_back(std::move(w));
            }
            continue;
        }
        if (v <= start || on_path[v]) continue; // start stays the smallest node
        if (static_cast<int>(path.size()) >= max_len) continue;
        path.push_back(v);
        on_path[v] = 1;
        circuit_dfs(g, start, path, on_path, max_len, cap, out);
        on_path[v] = 0;
        path.pop_back();
    }
}

} // namespace

std::vector<Walk> enumerate_circuits(const Graph& g, int max_len, std::size_t cap) {
    std::vector<Walk> out;
    if (max_len < 3) return out;
    std::vector<char> on_path(g.node_count(), 0);
    for (int s = 0; s < g.node_count(); ++s) {
        std::vector<int> path{s};
        on_path[s] = 1;
        circuit_dfs(g, s, path, on_path, max_len, cap, out);
        on_path[s] = 0;
    }
    return out;
}

bool is_chordless(const Graph& g, const Walk& circuit) {
    if (!circuit.closed()) throw std::invalid_argument("not a closed walk");
    const int len = circuit.length();
    for (int i = 0; i < len; ++i)
        for (int j = i + 2; j < len; ++j) {
            if (i == 0 && j == len - 1) continue; // consecutive around the wrap
            if (g.has_edge(circuit.nodes[i], circuit.nodes[j])) return false;
        }
    return true;
}

Graph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs at least 3 nodes");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    edges.emplace_back(0, n - 1);
    return Graph(n, std::move(edges));
}

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph(n, std::move(edges));
}

} // namespace ellipt
