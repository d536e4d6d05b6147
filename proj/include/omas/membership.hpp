#pragma once

#include <optional>
#include <vector>

#include "omas/rng.hpp"
#include "omas/scenario.hpp"
#include "omas/types.hpp"

namespace omas {

// Per-step active sets V[k] for k = 0..horizon. The extra trailing set makes
// the transition sets at step horizon-1 well defined.
//
// Transition sets at step k:
//   departing D[k] = V[k] \ V[k+1]   (active at k, gone at k+1)
//   arriving  A[k] = V[k+1] \ V[k]   (inactive at k, active at k+1)
//   remaining R[k] = V[k] ∩ V[k+1]
struct MembershipSchedule {
    int horizon = 0;
    std::vector<std::vector<NodeId>> active;  // horizon+1 sorted sets
    std::optional<int> stabilization_step;

    bool is_active(NodeId v, int k) const;
    std::vector<NodeId> remaining_at(int k) const;
    std::vector<NodeId> arriving_at(int k) const;
    std::vector<NodeId> departing_at(int k) const;

    void validate() const;  // throws on malformed schedules
};

// What each node knows about its own future departures, plus its maximum
// processing delay. The simulator grants exact knowledge: the declared
// window [k+rho_l, k+rho_u] collapses onto the true next departure step,
// which is the strongest window admissible.
struct DepartureKnowledge {
    std::vector<std::vector<int>> departure_steps;  // per node, sorted step indices
    std::vector<int> tau_bar;                       // per node

    static DepartureKnowledge from_schedule(const MembershipSchedule& sched,
                                            const ScenarioConfig& cfg);

    // Smallest s >= k with v in D[s]; nullopt if the node never departs again.
    std::optional<int> next_departure(NodeId v, int k) const;

    // (rho_l, rho_u) with rho_u = rho_l + 1 > rho_l >= 1, present only when a
    // future departure is scheduled strictly after k.
    std::optional<std::pair<int, int>> rho_bounds(NodeId v, int k) const;
};

struct StepSets {
    std::vector<NodeId> remaining;            // R[k]
    std::vector<NodeId> arriving;             // A[k]
    std::vector<NodeId> departing;            // D[k]
    std::vector<NodeId> departing_soon;       // S[k]
    std::vector<NodeId> long_term_remaining;  // R'[k]
};

// The five transition sets at step k. S[k] holds nodes whose next departure
// lies within their own processing-delay horizon; R'[k] holds nodes
// guaranteed active beyond it. S[k] and R'[k] partition R[k].
StepSets node_sets_at(const MembershipSchedule& sched, const DepartureKnowledge& knowledge, int k);

// Random churn schedule: per step, round(rate * n[k]) departures sampled
// uniformly from the active set, and the same count (perturbed +1/-1) of
// arrivals from the inactive pool; when the pool runs short every inactive
// node joins. No churn once the stabilization step is reached.
MembershipSchedule generate_membership_schedule(const ScenarioConfig& cfg, Rng& rng);

}  // namespace omas
