#include "netdetect/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

namespace netdetect {

namespace {

std::vector<Graph::Edge> normalize_edges(int n, std::vector<Graph::Edge> edges) {
    for (auto& [i, j] : edges) {
        if (i == j)
            throw std::invalid_argument("graph: self-loop at node " + std::to_string(i));
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace

Graph::Graph(int node_count) : Graph(node_count, {}) {}

Graph::Graph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(normalize_edges(node_count, std::move(edges))) {
    if (node_count_ <= 0) throw std::invalid_argument("graph: node count must be positive");
    adjacency_.resize(node_count_);
    for (const auto& [i, j] : edges_) {
        adjacency_[i].push_back(j);
        adjacency_[j].push_back(i);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

const std::vector<int>& Graph::neighbors(int i) const {
    if (i < 0 || i >= node_count_)
        throw std::invalid_argument("graph: node " + std::to_string(i) + " out of range");
    return adjacency_[i];
}

bool Graph::has_edge(int i, int j) const {
    const auto& adj = neighbors(i);
    return std::binary_search(adj.begin(), adj.end(), j);
}

bool Graph::is_acyclic() const {
    // Forest check: every component must satisfy |E| = |V| - 1, detected by
    // BFS finding a visited non-parent neighbor.
    std::vector<int> parent(node_count_, -2);
    for (int root = 0; root < node_count_; ++root) {
        if (parent[root] != -2) continue;
        parent[root] = -1;
        std::queue<int> frontier;
        frontier.push(root);
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int v : adjacency_[u]) {
                if (v == parent[u]) {
                    // A parent edge is consumed once; a second u-v edge would have
                    // been deduplicated, so skipping the parent exactly once is safe.
                    continue;
                }
                if (parent[v] != -2) return false;
                parent[v] = u;
                frontier.push(v);
            }
        }
    }
    return true;
}

std::vector<int> Graph::component_labels() const {
    std::vector<int> label(node_count_, -1);
    int next = 0;
    for (int root = 0; root < node_count_; ++root) {
        if (label[root] != -1) continue;
        label[root] = next;
        std::queue<int> frontier;
        frontier.push(root);
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int v : adjacency_[u]) {
                if (label[v] == -1) {
                    label[v] = next;
                    frontier.push(v);
                }
            }
        }
        ++next;
    }
    return label;
}

std::vector<std::vector<int>> Graph::components() const {
    auto label = component_labels();
    int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<int>> comps(count);
    for (int i = 0; i < node_count_; ++i) comps[label[i]].push_back(i);
    return comps;
}

Graph union_graph(const Graph& g0, const Graph& g1) {
    if (g0.node_count() != g1.node_count())
        throw std::invalid_argument("union_graph: node counts differ");
    std::vector<Graph::Edge> edges = g0.edges();
    edges.insert(edges.end(), g1.edges().begin(), g1.edges().end());
    return Graph(g0.node_count(), std::move(edges));
}

Graph evolve_observed_graph(const Graph& g, const std::vector<int>& observed) {
    const int n = g.node_count();
    std::vector<char> is_observed(n, 0);
    for (int v : observed) {
        if (v < 0 || v >= n)
            throw std::invalid_argument("evolve_observed_graph: node out of range");
        is_observed[v] = 1;
    }
    std::vector<Graph::Edge> edges;
    // BFS from each observed source through unobserved interiors only.
    std::vector<char> reached(n, 0);
    for (int src : observed) {
        std::fill(reached.begin(), reached.end(), 0);
        reached[src] = 1;
        std::queue<int> frontier;
        frontier.push(src);
        while (!frontier.empty()) {
            int u = frontier.front();
            frontier.pop();
            for (int v : g.neighbors(u)) {
                if (reached[v]) continue;
                reached[v] = 1;
                if (is_observed[v]) {
                    if (src < v) edges.emplace_back(src, v);
                } else {
                    frontier.push(v);
                }
            }
        }
    }
    return Graph(n, std::move(edges));
}

Graph read_edge_list(std::istream& in, int node_count) {
    std::vector<Graph::Edge> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        int i, j;
        if (!(ls >> i)) continue;  // blank line
        if (!(ls >> j))
            throw std::invalid_argument("edge list line " + std::to_string(lineno) +
                                        ": expected two node indices");
        edges.emplace_back(i, j);
    }
    return Graph(node_count, std::move(edges));
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

}  // namespace netdetect
