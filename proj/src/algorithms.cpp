#include "omas/algorithms.hpp"

#include <algorithm>
#include <stdexcept>

namespace omas {

namespace {

bool member(const std::vector<NodeId>& sorted, NodeId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

void require_single(int hits, NodeId node) {
    if (hits > 1)
        throw std::logic_error("classify_mode: node " + std::to_string(node) +
                               " sits in multiple transition sets (schedule corruption)");
}

// Shared remaining-type round body. Refreshes the state triple and splits
// when the node holds tokens; with z = 0 there is nothing to split and the
// stale state stays (there is no ratio to snapshot).
StepOutcome remaining_round(NodeRecord node, const std::vector<NodeId>& out_targets,
                            const std::vector<MassPair>& inbox, int k, int delay, Rng& rng) {
    StepOutcome out;
    MassPair kept;
    if (node.mass.z <= 0) {
        kept = node.mass;
    } else {
        node.state = StateTriple{node.mass.y, node.mass.z, floor_div(node.mass.y, node.mass.z)};
        node.nu = k;
        ProbabilityMap probs = remaining_probabilities(out_targets, node.id);
        SplitResult split = split_mass(node.mass, probs, node.id, rng);
        kept = split.kept;
        for (const auto& [target, piece] : split.sends)
            out.messages.push_back({node.id, target, piece.y, piece.z, k, k + delay});
    }
    node.mass = merge_received(kept, inbox);
    out.node = node;
    return out;
}

StepOutcome departing_round(NodeRecord node, const std::vector<NodeId>& out_qualifying,
                            const std::vector<MassPair>& inbox, int k, bool open_handoff,
                            Rng& rng) {
    StepOutcome out;
    if (out_qualifying.empty()) throw DepartureConditionViolated(node.id);
    MassPair mass = merge_received(node.mass, inbox);
    ProbabilityMap probs = departing_probabilities(out_qualifying);
    NodeId target = sample_target(probs, rng);
    MassPair payload = open_handoff ? departure_handoff_open(mass)
                                    : departure_handoff_closed(mass, node.x);
    out.messages.push_back({node.id, target, payload.y, payload.z, k, k});
    node.mass = MassPair{0, 0};
    out.node = node;
    return out;
}

}  // namespace

Mode classify_mode(AlgorithmKind kind, NodeId node, const StepSets& sets) {
    if (kind == AlgorithmKind::QAPOD) {
        int hits = 0;
        Mode mode = Mode::Inactive;
        if (member(sets.departing, node)) { ++hits; mode = Mode::Departing; }
        if (member(sets.departing_soon, node)) { ++hits; mode = Mode::DepartingSoon; }
        if (member(sets.long_term_remaining, node)) { ++hits; mode = Mode::LongTermRemaining; }
        if (member(sets.arriving, node)) { ++hits; mode = Mode::Arriving; }
        require_single(hits, node);
        return mode;
    }
    int hits = 0;
    Mode mode = Mode::Inactive;
    if (member(sets.arriving, node)) { ++hits; mode = Mode::Arriving; }
    if (member(sets.departing, node)) { ++hits; mode = Mode::Departing; }
    if (member(sets.remaining, node)) { ++hits; mode = Mode::Remaining; }
    require_single(hits, node);
    return mode;
}

StepOutcome step_remaining_qaod(NodeRecord node, const std::vector<NodeId>& out_remaining,
                                const std::vector<MassPair>& inbox, int k, Rng& rng) {
    return remaining_round(std::move(node), out_remaining, inbox, k, 0, rng);
}

StepOutcome step_departing_qaod(NodeRecord node, const std::vector<NodeId>& out_remaining,
                                const std::vector<MassPair>& inbox, int k, Rng& rng) {
    return departing_round(std::move(node), out_remaining, inbox, k, false, rng);
}

StepOutcome step_qapod(NodeRecord node, Mode mode, const std::vector<NodeId>& out_longterm,
                       const std::vector<MassPair>& inbox, int delay_draw, int k, Rng& rng) {
    switch (mode) {
        case Mode::LongTermRemaining:
            return remaining_round(std::move(node), out_longterm, inbox, k, delay_draw, rng);
        case Mode::DepartingSoon: {
            StepOutcome out;
            node.mass = merge_received(node.mass, inbox);
            out.node = std::move(node);
            return out;
        }
        case Mode::Departing:
            // The handoff itself travels with zero delay; the node is gone
            // next step and the payload must land while the target is known
            // to stay.
            return departing_round(std::move(node), out_longterm, inbox, k, false, rng);
        default:
            throw std::logic_error("step_qapod: unexpected mode");
    }
}

StepOutcome step_qaiod(NodeRecord node, Mode mode, const std::vector<NodeId>& out_remaining,
                       const std::vector<MassPair>& inbox, int k, Rng& rng) {
    switch (mode) {
        case Mode::Remaining:
            node.eta = false;
            return remaining_round(std::move(node), out_remaining, inbox, k, 0, rng);
        case Mode::Departing:
            return departing_round(std::move(node), out_remaining, inbox, k, true, rng);
        case Mode::Arriving: {
            StepOutcome out;
            auto [mass, state] = arrival_init_open(node);
            node.mass = mass;
            node.state = state;
            node.eta = false;
            out.node = std::move(node);
            return out;
        }
        default:
            throw std::logic_error("step_qaiod: unexpected mode");
    }
}

}  // namespace omas
