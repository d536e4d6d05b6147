#include <vector>

#include "doctest.h"
#include "omas/graph.hpp"

using namespace omas;

namespace {

Digraph make(std::vector<NodeId> nodes, std::vector<Digraph::Edge> edges) {
    return Digraph(std::move(nodes), std::move(edges));
}

// Floyd-Warshall reachability; the independent oracle for strong
// connectivity on small graphs.
bool oracle_strongly_connected(const Digraph& g) {
    const auto& nodes = g.nodes();
    const std::size_t n = nodes.size();
    if (n <= 1) return true;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& [from, to] : g.edges()) {
        auto idx = [&](NodeId v) {
            return std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin();
        };
        reach[idx(from)][idx(to)] = true;
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][m] && reach[m][j]) reach[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!reach[i][j]) return false;
    return true;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("three-cycle is strongly connected") {
    CHECK(is_strongly_connected(make({0, 1, 2}, {{0, 1}, {1, 2}, {2, 0}})));
}

TEST_CASE("directed path is not strongly connected") {
    CHECK_FALSE(is_strongly_connected(make({0, 1, 2}, {{0, 1}, {1, 2}})));
}

TEST_CASE("single node is vacuously strongly connected") {
    CHECK(is_strongly_connected(make({5}, {})));
}

TEST_CASE("union of digraphs is the set union") {
    Digraph a = make({0, 1}, {{0, 1}});
    Digraph b = make({0, 1}, {{1, 0}});
    std::vector<Digraph> gs{a, b};
    Digraph u = union_digraph(gs);
    CHECK(u == make({0, 1}, {{0, 1}, {1, 0}}));
}

TEST_CASE("union is idempotent") {
    Digraph g = make({0, 1, 2}, {{0, 1}, {1, 2}});
    std::vector<Digraph> gs{g, g};
    CHECK(union_digraph(gs) == g);
}

TEST_CASE("empty digraph is the union identity") {
    Digraph g = make({0, 1}, {{0, 1}});
    std::vector<Digraph> gs{g, make({0, 1}, {})};
    CHECK(union_digraph(gs) == g);
}

TEST_CASE("union of empty sequence is an error") {
    std::vector<Digraph> gs;
    CHECK_THROWS_AS(union_digraph(gs), std::invalid_argument);
}

TEST_CASE("self-loops and dangling endpoints are rejected") {
    CHECK_THROWS_AS(make({0, 1}, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(make({0, 1}, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("matches all-pairs reachability oracle on every digraph up to 4 nodes") {
    // The 5-node exhaustive sweep lives in the acceptance suite; this keeps
    // the unit run quick.
    for (int n = 1; n <= 4; ++n) {
        std::vector<Digraph::Edge> slots;
        for (NodeId i = 0; i < (NodeId)n; ++i)
            for (NodeId j = 0; j < (NodeId)n; ++j)
                if (i != j) slots.emplace_back(i, j);
        std::vector<NodeId> nodes;
        for (NodeId i = 0; i < (NodeId)n; ++i) nodes.push_back(i);

        for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
            std::vector<Digraph::Edge> edges;
            for (std::size_t b = 0; b < slots.size(); ++b)
                if (mask & (1u << b)) edges.push_back(slots[b]);
            Digraph g(nodes, edges);
            CHECK(is_strongly_connected(g) == oracle_strongly_connected(g));
        }
    }
}

TEST_CASE("adjacency mirrors out-neighbors") {
    Digraph g = make({0, 2, 3}, {{0, 2}, {0, 3}, {3, 0}});
    Adjacency adj(g, 4);
    CHECK(adj.out(0) == std::vector<NodeId>{2, 3});
    CHECK(adj.out(3) == std::vector<NodeId>{0});
    CHECK(adj.out(2).empty());
    CHECK(g.in_neighbors(0) == std::vector<NodeId>{3});
}

}  // TEST_SUITE
