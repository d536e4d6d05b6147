#pragma once

#include <span>
#include <utility>
#include <vector>

#include "omas/types.hpp"

namespace omas {

// Directed graph over an explicit node subset of the potential node set.
// Self-loops are never stored; self-delivery is the protocol's virtual
// self-edge and lives outside the topology.
class Digraph {
  public:
    using Edge = std::pair<NodeId, NodeId>;  // (from, to)

    Digraph() = default;
    Digraph(std::vector<NodeId> nodes, std::vector<Edge> edges);

    const std::vector<NodeId>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_node(NodeId v) const;
    bool has_edge(NodeId from, NodeId to) const;

    std::vector<NodeId> out_neighbors(NodeId v) const;
    std::vector<NodeId> in_neighbors(NodeId v) const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

  private:
    std::vector<NodeId> nodes_;  // sorted, unique
    std::vector<Edge> edges_;    // sorted, unique, endpoints in nodes_
};

// True iff a directed path exists for every ordered pair of nodes.
// A single node (or the empty graph) is vacuously strongly connected.
bool is_strongly_connected(const Digraph& g);

// Node set = union of node sets, edge set = union of edge sets.
// Throws std::invalid_argument on an empty sequence.
Digraph union_digraph(std::span<const Digraph> graphs);

// Out-adjacency lists indexed directly by NodeId, for the hot per-round
// neighbor queries. Lists are sorted.
class Adjacency {
  public:
    Adjacency(const Digraph& g, std::size_t n_total);
    const std::vector<NodeId>& out(NodeId v) const { return out_[v]; }

  private:
    std::vector<std::vector<NodeId>> out_;
};

}  // namespace omas
