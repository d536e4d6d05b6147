#include "omas/topology.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace omas {

void TopologySequence::validate(const MembershipSchedule& sched) const {
    if ((int)per_step.size() != sched.horizon)
        throw std::invalid_argument("topology: expected one digraph per simulated step");
    for (int k = 0; k < sched.horizon; ++k)
        if (per_step[k].nodes() != sched.active[k])
            throw std::invalid_argument("topology: node set mismatch at step " + std::to_string(k));
    if (!instance_probs.empty()) {
        if (instance_probs.size() != instances.size())
            throw std::invalid_argument("topology: one probability per instance required");
        Rational sum{0};
        for (const auto& p : instance_probs) {
            if (!(p > Rational{0})) throw std::invalid_argument("topology: instance probs must be > 0");
            sum = sum + p;
        }
        if (sum != Rational{1}) throw std::invalid_argument("topology: instance probs must sum to 1");
    }
}

bool verify_T_joint_connectivity(const TopologySequence& seq, int from_step, int T) {
    if (T < 1) throw std::invalid_argument("verify_T_joint_connectivity: T must be >= 1");
    const int horizon = (int)seq.per_step.size();
    if (from_step + T > horizon)
        throw std::invalid_argument("verify_T_joint_connectivity: window exceeds horizon");
    for (int start = from_step; start + T <= horizon; ++start) {
        for (int t = start; t < start + T; ++t)
            if (seq.per_step[t].nodes() != seq.per_step[start].nodes())
                throw std::invalid_argument(
                    "verify_T_joint_connectivity: node sets differ inside window at step " +
                    std::to_string(t));
        Digraph u = union_digraph(std::span<const Digraph>(&seq.per_step[start], (std::size_t)T));
        if (!is_strongly_connected(u)) return false;
    }
    return true;
}

bool verify_open_Tprime_connectivity(const MembershipSchedule& sched, const TopologySequence& seq,
                                     int k, int L_prime, int T_prime,
                                     const std::vector<Digraph::Edge>& all_possible_edges) {
    if (T_prime < L_prime)
        throw std::invalid_argument("verify_open_Tprime_connectivity: T' must be >= L'");
    if (k + T_prime > (int)seq.per_step.size())
        throw std::invalid_argument("verify_open_Tprime_connectivity: window exceeds horizon");

    auto ever_active = [&](int len) {
        std::set<NodeId> s;
        for (int t = k; t <= k + len && t < (int)sched.active.size(); ++t)
            s.insert(sched.active[t].begin(), sched.active[t].end());
        return std::vector<NodeId>(s.begin(), s.end());
    };
    std::vector<NodeId> nodes_L = ever_active(L_prime);

    std::vector<Digraph::Edge> q_edges;
    for (const auto& e : all_possible_edges)
        if (std::binary_search(nodes_L.begin(), nodes_L.end(), e.first) &&
            std::binary_search(nodes_L.begin(), nodes_L.end(), e.second))
            q_edges.push_back(e);
    Digraph anytime_virtual(nodes_L, q_edges);
    if (!is_strongly_connected(anytime_virtual)) return false;

    std::vector<NodeId> nodes_T = ever_active(T_prime);
    if (nodes_T != nodes_L) return false;

    std::set<Digraph::Edge> seen;
    for (int t = k; t <= k + T_prime && t < (int)seq.per_step.size(); ++t)
        for (const auto& e : seq.per_step[t].edges()) seen.insert(e);
    std::vector<Digraph::Edge> wanted(q_edges.begin(), q_edges.end());
    std::sort(wanted.begin(), wanted.end());
    return std::vector<Digraph::Edge>(seen.begin(), seen.end()) == wanted;
}

namespace {

// Per-step out-degree target; grows slowly with the active count.
int step_out_degree(std::size_t n_active) {
    if (n_active <= 2) return (int)n_active - 1;
    return std::max(2, (int)std::lround(std::log2((double)n_active)) + 1);
}

// Random digraph over `nodes` with roughly `deg` out-edges per node.
std::vector<Digraph::Edge> random_edges(const std::vector<NodeId>& nodes, int deg, Rng& rng) {
    std::vector<Digraph::Edge> edges;
    const std::size_t n = nodes.size();
    if (n < 2 || deg <= 0) return edges;
    for (NodeId v : nodes) {
        std::set<NodeId> picked;
        int want = std::min<int>(deg, (int)n - 1);
        while ((int)picked.size() < want) {
            NodeId w = nodes[rng.uniform_below(n)];
            if (w != v) picked.insert(w);
        }
        for (NodeId w : picked) edges.emplace_back(v, w);
    }
    return edges;
}

std::vector<NodeId> shuffled(std::vector<NodeId> v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.uniform_below(i)]);
    return v;
}

}  // namespace

TopologySequence generate_topology_sequence(const MembershipSchedule& sched,
                                            const DepartureKnowledge& knowledge,
                                            const ScenarioConfig& cfg, AlgorithmKind kind, Rng& rng,
                                            InstanceSchedule instance_schedule) {
    TopologySequence seq;
    seq.per_step.resize(sched.horizon);

    const int k_stable = sched.stabilization_step ? *sched.stabilization_step : sched.horizon;

    // Steps the violation flag corrupts: spread over the churn phase so the
    // negative runs lose mass mid-flight, not only at the very start.
    std::vector<int> violate_at;
    if (cfg.violate_departure_condition) {
        std::vector<int> candidates;
        for (int k = 0; k < k_stable; ++k)
            if (!sched.departing_at(k).empty()) candidates.push_back(k);
        if (candidates.empty())
            throw std::invalid_argument("topology: violation requested but no step has departures");
        for (int q = 1; q <= 3; ++q) {
            int idx = (int)((candidates.size() - 1) * (std::size_t)q / 4);
            violate_at.push_back(candidates[idx]);
        }
        std::sort(violate_at.begin(), violate_at.end());
        violate_at.erase(std::unique(violate_at.begin(), violate_at.end()), violate_at.end());
    }

    // Churn phase: independent random digraphs, then enforce (or break) the
    // departing handoff condition.
    for (int k = 0; k < k_stable && k < sched.horizon; ++k) {
        const auto& nodes = sched.active[k];
        auto edges = random_edges(nodes, step_out_degree(nodes.size()), rng);

        StepSets sets = node_sets_at(sched, knowledge, k);
        const std::vector<NodeId>& required =
            (kind == AlgorithmKind::QAPOD) ? sets.long_term_remaining : sets.remaining;

        const bool break_here =
            std::binary_search(violate_at.begin(), violate_at.end(), k);
        std::optional<NodeId> broken;
        if (break_here && !sets.departing.empty())
            broken = sets.departing[rng.uniform_below(sets.departing.size())];

        std::set<Digraph::Edge> edge_set(edges.begin(), edges.end());
        for (NodeId v : sets.departing) {
            if (broken && v == *broken) {
                for (NodeId r : required) edge_set.erase({v, r});
                continue;
            }
            bool has_required = false;
            for (NodeId r : required)
                if (edge_set.count({v, r})) {
                    has_required = true;
                    break;
                }
            if (!has_required) {
                if (required.empty())
                    throw std::runtime_error(
                        "topology: no handoff target exists for departing node at step " +
                        std::to_string(k));
                edge_set.insert({v, required[rng.uniform_below(required.size())]});
            }
        }
        seq.per_step[k] = Digraph(nodes, {edge_set.begin(), edge_set.end()});
    }

    // Stable phase: a fixed family of instances over the stable node set
    // whose union is strongly connected (a shuffled cycle guarantees that),
    // drawn i.i.d. (or round-robin, for deterministic connectivity tests).
    if (k_stable < sched.horizon) {
        const auto& stable_nodes = sched.active[k_stable];
        const int T = cfg.instance_count;
        const std::size_t n = stable_nodes.size();

        std::vector<Digraph::Edge> union_edges;
        if (n >= 2) {
            auto cyc = shuffled(stable_nodes, rng);
            for (std::size_t i = 0; i < n; ++i)
                union_edges.emplace_back(cyc[i], cyc[(i + 1) % n]);
            auto extra = random_edges(stable_nodes, 4 * step_out_degree(n), rng);
            union_edges.insert(union_edges.end(), extra.begin(), extra.end());
            std::sort(union_edges.begin(), union_edges.end());
            union_edges.erase(std::unique(union_edges.begin(), union_edges.end()),
                              union_edges.end());
        }

        // Every union edge is owned by one instance; instances additionally
        // share a slice of the union so per-step graphs stay usefully dense.
        const std::uint64_t share_ppm = 550000;
        std::vector<std::vector<Digraph::Edge>> inst_edges(T);
        for (const auto& e : union_edges) {
            std::size_t owner = (std::size_t)rng.uniform_below((std::uint64_t)T);
            for (int t = 0; t < T; ++t)
                if ((std::size_t)t == owner || rng.bernoulli(share_ppm, 1000000))
                    inst_edges[t].push_back(e);
        }
        seq.instances.reserve(T);
        for (int t = 0; t < T; ++t)
            seq.instances.emplace_back(stable_nodes, std::move(inst_edges[t]));
        seq.instance_probs.assign(T, Rational{1, T});

        for (int k = k_stable; k < sched.horizon; ++k) {
            std::size_t theta = (instance_schedule == InstanceSchedule::RoundRobin)
                                    ? (std::size_t)((k - k_stable) % T)
                                    : (std::size_t)rng.uniform_below((std::uint64_t)T);
            seq.per_step[k] = seq.instances[theta];
        }
    }

    seq.validate(sched);
    return seq;
}

}  // namespace omas
