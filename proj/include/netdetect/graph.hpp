#ifndef NETDETECT_GRAPH_HPP
#define NETDETECT_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace netdetect {

/// Undirected graph on dense node indices 0..n-1. Edges are stored as
/// sorted (i<j) pairs, deduplicated, with adjacency lists for iteration.
/// Immutable after construction; safe to share across trials.
class Graph {
public:
    using Edge = std::pair<int, int>;

    explicit Graph(int node_count);
    Graph(int node_count, std::vector<Edge> edges);

    int node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int i) const;
    int degree(int i) const { return static_cast<int>(neighbors(i).size()); }
    bool has_edge(int i, int j) const;

    bool is_acyclic() const;

    /// Connected components; each component lists node indices in increasing order.
    std::vector<std::vector<int>> components() const;

    /// Component label per node (labels are dense, 0-based).
    std::vector<int> component_labels() const;

private:
    int node_count_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

/// Edge union of two graphs over the same node set.
Graph union_graph(const Graph& g0, const Graph& g1);

/// Graph on the observed node set: edge (i,j) is present iff it exists in g
/// or some path from i to j in g has only unobserved interior nodes.
Graph evolve_observed_graph(const Graph& g, const std::vector<int>& observed);

/// Edge-list text format: one "i j" pair per line, 0-based.
Graph read_edge_list(std::istream& in, int node_count);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace netdetect

#endif
