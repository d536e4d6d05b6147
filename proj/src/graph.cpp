#include "omas/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace omas {

Digraph::Digraph(std::vector<NodeId> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const auto& [from, to] : edges_) {
        if (from == to) throw std::invalid_argument("Digraph: self-loop edges are not stored");
        if (!has_node(from) || !has_node(to))
            throw std::invalid_argument("Digraph: edge endpoint outside node set");
    }
}

bool Digraph::has_node(NodeId v) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

bool Digraph::has_edge(NodeId from, NodeId to) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

std::vector<NodeId> Digraph::out_neighbors(NodeId v) const {
    std::vector<NodeId> out;
    auto lo = std::lower_bound(edges_.begin(), edges_.end(), Edge{v, 0});
    for (auto it = lo; it != edges_.end() && it->first == v; ++it) out.push_back(it->second);
    return out;
}

std::vector<NodeId> Digraph::in_neighbors(NodeId v) const {
    std::vector<NodeId> in;
    for (const auto& [from, to] : edges_)
        if (to == v) in.push_back(from);
    return in;
}

namespace {

// Reach from source following edges mapped through `dir` (identity for the
// forward pass, swapped for the reverse pass). Node ids are first compacted
// to dense indices.
std::size_t reachable_count(const Digraph& g, bool reverse) {
    const auto& nodes = g.nodes();
    const std::size_t n = nodes.size();
    auto dense = [&](NodeId v) {
        return (std::size_t)(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
    };
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [from, to] : g.edges()) {
        std::size_t a = dense(from), b = dense(to);
        if (reverse) std::swap(a, b);
        adj[a].push_back(b);
    }
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count;
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
    const std::size_t n = g.node_count();
    if (n <= 1) return true;
    return reachable_count(g, false) == n && reachable_count(g, true) == n;
}

Digraph union_digraph(std::span<const Digraph> graphs) {
    if (graphs.empty()) throw std::invalid_argument("union_digraph: empty sequence");
    std::vector<NodeId> nodes;
    std::vector<Digraph::Edge> edges;
    for (const auto& g : graphs) {
        nodes.insert(nodes.end(), g.nodes().begin(), g.nodes().end());
        edges.insert(edges.end(), g.edges().begin(), g.edges().end());
    }
    return Digraph(std::move(nodes), std::move(edges));
}

Adjacency::Adjacency(const Digraph& g, std::size_t n_total) : out_(n_total) {
    for (const auto& [from, to] : g.edges()) out_[from].push_back(to);
}

}  // namespace omas
