#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace ellipt {

// Simple undirected graph on nodes 0..n-1. Edges are stored as (u, v) with
// u < v; that stored order doubles as the reference orientation whenever a
// signed traversal is needed. Edge indices are positions in the edge list.
class Graph {
public:
    Graph() : n_(0) {}
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::pair<int, int>& edge(int e) const { return edges_[e]; }

    const std::vector<int>& neighbors(int u) const { return adj_[u]; }
    // (neighbor, edge index) pairs, ascending by neighbor
    const std::vector<std::pair<int, int>>& incident(int u) const { return inc_[u]; }

    int degree(int u) const { return static_cast<int>(adj_[u].size()); }
    bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }
    int edge_index(int u, int v) const; // -1 when absent

    int component_count() const;
    std::vector<int> component_ids() const;

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<std::pair<int, int>>> inc_;
    std::map<std::pair<int, int>, int> index_;
};

// Node sequence; consecutive nodes must be adjacent in the graph it is read
// against. A closed walk repeats its first node at the end.
struct Walk {
    std::vector<int> nodes;

    bool closed() const { return nodes.size() >= 2 && nodes.front() == nodes.back(); }
    int length() const { return static_cast<int>(nodes.size()) - 1; }
};

struct SignedEdge {
    int edge; // edge index
    int sign; // +1 when traversed along the stored (u, v) orientation
};

// Resolves a walk into signed edge traversals; throws on a non-adjacent step.
std::vector<SignedEdge> walk_signed_edges(const Graph& g, const Walk& w);

struct CycleBasis {
    std::vector<int> parent;         // BFS forest parent per node, -1 at roots
    std::vector<int> parent_edge;    // edge index to parent, -1 at roots
    std::vector<int> depth;
    std::vector<int> order;          // node discovery order
    std::vector<int> tree_edges;     // forest edge indices in discovery order
    std::vector<int> non_tree_edges; // ascending edge indices
    std::vector<Walk> cycles;        // fundamental cycle per non-tree edge
};

// BFS spanning forest rooted at the lowest-index node of each component; one
// fundamental cycle per non-tree edge (the edge plus the tree path back).
CycleBasis fundamental_cycles(const Graph& g);

// Adds p new nodes after the originals, each adjacent to every earlier node
// (originals and previously added apexes alike).
Graph suspension(const Graph& g, int p);

// Glues g2 onto g1, identifying g2 node `first` with g1 node `second` for
// each pair. The identified set must induce a clique in both graphs
// (not_a_clique otherwise). Unidentified g2 nodes are appended in ascending
// order; g2_map (when given) receives the merged index of every g2 node.
Graph clique_sum(const Graph& g1, const Graph& g2,
                 const std::vector<std::pair<int, int>>& identify,
                 std::vector<int>* g2_map = nullptr);

struct HatGraph {
    Graph graph;                              // n + m nodes, 3m edges
    std::vector<std::array<int, 3>> triangles; // {i, j, v_ij} per original edge
};

// One fresh node v_ij per edge (i, j), adjacent to exactly i and j. Original
// edges keep their indices; v_ij for edge e is node n + e.
HatGraph hat_graph(const Graph& g);

// Exhaustive series-parallel style reduction: delete isolated and pendant
// nodes, suppress degree-2 nodes, merge parallel edges, drop self-loops.
// K4-minor-free iff everything reduces away.
bool is_k4_minor_free(const Graph& g);

// All simple cycles of length >= 3 up to max_len, each reported once up to
// rotation and reflection, as closed walks anchored at their smallest node.
// Throws resource_limit when more than cap circuits would be produced.
std::vector<Walk> enumerate_circuits(const Graph& g, int max_len, std::size_t cap = 100000);

// True when no two non-consecutive nodes of the circuit are adjacent.
bool is_chordless(const Graph& g, const Walk& circuit);

// Convenience builders used all over the tests and reductions.
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph path_graph(int n);

} // namespace ellipt
