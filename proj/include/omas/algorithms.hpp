#pragma once

#include <vector>

#include "omas/membership.hpp"
#include "omas/protocol.hpp"
#include "omas/types.hpp"

namespace omas {

// Which mode a node operates in at step k. The delay-aware algorithm splits
// the remaining set into long-term remaining and departing-soon; the other
// two use the plain remaining/arriving/departing partition. A node found in
// more than one transition set means the schedule is corrupt.
Mode classify_mode(AlgorithmKind kind, NodeId node, const StepSets& sets);

struct StepOutcome {
    NodeRecord node;
    std::vector<TransmissionMessage> messages;
};

// One full round of a remaining node: snapshot the state triple from the
// mass (when it holds any tokens), split the mass across the remaining
// out-neighborhood plus itself, then fold the inbox into the next-step mass.
// A node holding z = 0 neither refreshes nor transmits; it only absorbs.
StepOutcome step_remaining_qaod(NodeRecord node, const std::vector<NodeId>& out_remaining,
                                const std::vector<MassPair>& inbox, int k, Rng& rng);

// Departure round: merge anything delivered this step, then hand the mass
// (minus the node's own doubled initial state) to one uniformly chosen
// remaining out-neighbor. Throws DepartureConditionViolated when there is
// none; the caller records the information loss.
StepOutcome step_departing_qaod(NodeRecord node, const std::vector<NodeId>& out_remaining,
                                const std::vector<MassPair>& inbox, int k, Rng& rng);

// Delay-aware round. LongTermRemaining behaves like a remaining node but
// targets only long-term remaining out-neighbors and stamps emissions with
// the drawn processing delay. DepartingSoon absorbs and never emits.
// Departing hands off to a long-term remaining out-neighbor with no delay.
StepOutcome step_qapod(NodeRecord node, Mode mode, const std::vector<NodeId>& out_longterm,
                       const std::vector<MassPair>& inbox, int delay_draw, int k, Rng& rng);

// Indefinitely-open round. Remaining with z = 0 keeps everything untouched
// (still absorbing the inbox); otherwise behaves like the closed-sum round.
// Departing forwards the mass unchanged. Arriving applies the
// participation-aware initialization.
StepOutcome step_qaiod(NodeRecord node, Mode mode, const std::vector<NodeId>& out_remaining,
                       const std::vector<MassPair>& inbox, int k, Rng& rng);

}  // namespace omas
