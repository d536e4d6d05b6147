#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "omas/rational.hpp"
#include "omas/rng.hpp"
#include "omas/types.hpp"

namespace omas {

// Integer token mass carried by a node: y is the token value sum, z the
// token count. Closed-sum handoffs travel with negative corrections, so y
// and z may briefly go negative at a receiver when departures chain onto
// low-token holders; the totals stay exact and the debt clears as pieces
// arrive.
struct MassPair {
    std::int64_t y = 0;
    std::int64_t z = 0;

    MassPair& operator+=(const MassPair& o) {
        y += o.y;
        z += o.z;
        return *this;
    }
    friend MassPair operator+(MassPair a, const MassPair& b) { return a += b; }
    friend bool operator==(const MassPair&, const MassPair&) = default;
};

// Snapshot of the mass variables taken on remaining steps; q_s is the
// quantized estimate the node reports.
struct StateTriple {
    std::int64_t y_s = 0;
    std::int64_t z_s = 0;
    std::int64_t q_s = 0;

    friend bool operator==(const StateTriple&, const StateTriple&) = default;
};

struct NodeRecord {
    NodeId id = 0;
    std::int64_t x = 0;  // initial state
    MassPair mass;
    StateTriple state;
    bool eta = true;      // true until the node has been active at least once
    int nu = -1;          // last step the state triple was refreshed
};

struct TransmissionMessage {
    NodeId from = 0;
    NodeId to = 0;
    std::int64_t c_y = 0;
    std::int64_t c_z = 0;
    int emit_step = 0;
    int deliver_step = 0;

    friend bool operator==(const TransmissionMessage&, const TransmissionMessage&) = default;
};

// Raised when a departing node has no qualifying out-neighbor to hand its
// mass to. The engine catches it, records the information loss, and lets the
// run continue so the necessity of the handoff condition is observable.
struct DepartureConditionViolated : std::runtime_error {
    explicit DepartureConditionViolated(NodeId node)
        : std::runtime_error("departing node " + std::to_string(node) +
                             " has no qualifying out-neighbor"),
          node(node) {}
    NodeId node;
};

// Probability assignment over candidate receivers, kept exact. Entries are
// sorted by node id; sampling walks cumulative weights with a single draw.
using ProbabilityMap = std::vector<std::pair<NodeId, Rational>>;

// Uniform over the remaining out-neighbors plus a virtual self-edge:
// each of them gets 1 / (1 + |out_remaining|).
ProbabilityMap remaining_probabilities(const std::vector<NodeId>& out_remaining, NodeId self);

// Uniform over the qualifying out-neighbors, no self option. Throws
// DepartureConditionViolated when the set is empty.
ProbabilityMap departing_probabilities(const std::vector<NodeId>& out_qualifying);

NodeId sample_target(const ProbabilityMap& probs, Rng& rng);

struct SplitResult {
    MassPair kept;
    std::vector<std::pair<NodeId, MassPair>> sends;  // sorted by receiver, merged per receiver
};

// Splits the mass into z near-equal pieces: while more than one piece
// remains, a piece carrying floor(y/z) is peeled off and assigned to a drawn
// target; the final piece always stays with the sender. Pieces drawn to self
// fold into `kept`. Mass is conserved exactly.
SplitResult split_mass(const MassPair& mass, const std::function<NodeId()>& draw_target,
                       NodeId self);
SplitResult split_mass(const MassPair& mass, const ProbabilityMap& targets, NodeId self, Rng& rng);

// Componentwise sum of the kept mass and everything delivered this step.
MassPair merge_received(const MassPair& kept, const std::vector<MassPair>& inbox);

// A node joining the network injects twice its initial state: mass (2x, 2),
// state (2x, 2, x).
std::pair<MassPair, StateTriple> arrival_init(std::int64_t x);

// Final message of a departing node under the active-set average: forwards
// its mass minus its own doubled initial contribution.
MassPair departure_handoff_closed(const MassPair& mass, std::int64_t x);

// Final message under the historical average: the mass moves unchanged, the
// departed node's contribution stays in the global sum.
MassPair departure_handoff_open(const MassPair& mass);

// Re-activation rule for the indefinitely open algorithm: a first-time
// arrival behaves like arrival_init; a returning node restores its stored
// state and carries no mass until neighbors send it some.
std::pair<MassPair, StateTriple> arrival_init_open(const NodeRecord& record);

}  // namespace omas
