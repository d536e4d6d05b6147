#pragma once

#include <optional>
#include <vector>

#include "omas/graph.hpp"
#include "omas/membership.hpp"
#include "omas/rational.hpp"
#include "omas/rng.hpp"
#include "omas/scenario.hpp"

namespace omas {

// Per-step communication digraphs. Each per_step[k] spans exactly the active
// set V[k]. Once the active set stabilizes, every step draws one of the
// pre-generated instances over the stable node set.
struct TopologySequence {
    std::vector<Digraph> per_step;
    std::vector<Digraph> instances;        // empty when there is no stable phase
    std::vector<Rational> instance_probs;  // all > 0, summing to 1

    void validate(const MembershipSchedule& sched) const;
};

// How the stable-phase instance for each step is chosen.
enum class InstanceSchedule { IID, RoundRobin };

// True iff the union digraph over every length-T window starting at
// from_step + beta (for all beta while the window fits) is strongly
// connected. All steps inside a window must share one node set.
bool verify_T_joint_connectivity(const TopologySequence& seq, int from_step, int T);

// Windowed connectivity check for indefinitely open sequences. Builds the
// ever-active node set I over [k, k+L'] and the possible-edge set Q it
// induces from `all_possible_edges`, then requires (I, Q) to be strongly
// connected and the union digraph over [k, k+T'] to reproduce exactly
// (I, Q).
bool verify_open_Tprime_connectivity(const MembershipSchedule& sched, const TopologySequence& seq,
                                     int k, int L_prime, int T_prime,
                                     const std::vector<Digraph::Edge>& all_possible_edges);

// Random topology conforming to the departure handoff condition: every
// departing node keeps at least one out-neighbor in the set it must hand off
// to (R[k], or R'[k] for the delay-aware algorithm). With the violation flag
// set, selected departing nodes are stripped of those edges instead.
TopologySequence generate_topology_sequence(const MembershipSchedule& sched,
                                            const DepartureKnowledge& knowledge,
                                            const ScenarioConfig& cfg, AlgorithmKind kind, Rng& rng,
                                            InstanceSchedule instance_schedule = InstanceSchedule::IID);

}  // namespace omas
