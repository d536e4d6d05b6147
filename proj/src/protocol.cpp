#include "omas/protocol.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace omas {

ProbabilityMap remaining_probabilities(const std::vector<NodeId>& out_remaining, NodeId self) {
    std::vector<NodeId> targets = out_remaining;
    targets.push_back(self);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    ProbabilityMap probs;
    probs.reserve(targets.size());
    Rational p{1, (std::int64_t)targets.size()};
    for (NodeId t : targets) probs.emplace_back(t, p);
    return probs;
}

ProbabilityMap departing_probabilities(const std::vector<NodeId>& out_qualifying) {
    if (out_qualifying.empty()) throw DepartureConditionViolated(0);
    std::vector<NodeId> targets = out_qualifying;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    ProbabilityMap probs;
    probs.reserve(targets.size());
    Rational p{1, (std::int64_t)targets.size()};
    for (NodeId t : targets) probs.emplace_back(t, p);
    return probs;
}

NodeId sample_target(const ProbabilityMap& probs, Rng& rng) {
    // Single uniform draw against cumulative weights over the common
    // denominator; exact, no floating point.
    std::int64_t common = 1;
    for (const auto& [node, p] : probs) common = std::lcm(common, p.den());
    std::int64_t total = 0;
    for (const auto& [node, p] : probs) total += p.num() * (common / p.den());

    std::int64_t r = (std::int64_t)rng.uniform_below((std::uint64_t)total);
    std::int64_t acc = 0;
    for (const auto& [node, p] : probs) {
        acc += p.num() * (common / p.den());
        if (r < acc) return node;
    }
    return probs.back().first;  // unreachable for a well-formed map
}

SplitResult split_mass(const MassPair& mass, const std::function<NodeId()>& draw_target,
                       NodeId self) {
    SplitResult result;
    std::map<NodeId, MassPair> buckets;

    std::int64_t y = mass.y;
    std::int64_t z = mass.z;
    std::int64_t delta_z = z;
    if (delta_z <= 1) {
        result.kept = mass;
        return result;
    }
    while (delta_z > 1) {
        std::int64_t delta_y = floor_div(y, z);
        NodeId target = draw_target();
        buckets[target] += MassPair{delta_y, 1};
        y -= delta_y;
        z -= 1;
        delta_z -= 1;
    }
    buckets[self] += MassPair{y, z};  // last piece stays home

    for (auto& [node, m] : buckets) {
        if (node == self)
            result.kept += m;
        else
            result.sends.emplace_back(node, m);
    }
    return result;
}

SplitResult split_mass(const MassPair& mass, const ProbabilityMap& targets, NodeId self, Rng& rng) {
    return split_mass(
        mass, [&]() { return sample_target(targets, rng); }, self);
}

MassPair merge_received(const MassPair& kept, const std::vector<MassPair>& inbox) {
    MassPair total = kept;
    for (const auto& m : inbox) total += m;
    return total;
}

std::pair<MassPair, StateTriple> arrival_init(std::int64_t x) {
    MassPair mass{2 * x, 2};
    StateTriple state{2 * x, 2, floor_div(2 * x, 2)};
    return {mass, state};
}

MassPair departure_handoff_closed(const MassPair& mass, std::int64_t x) {
    return {mass.y - 2 * x, mass.z - 2};
}

MassPair departure_handoff_open(const MassPair& mass) {
    return mass;
}

std::pair<MassPair, StateTriple> arrival_init_open(const NodeRecord& record) {
    if (record.eta) return arrival_init(record.x);
    if (record.nu < -1)
        throw std::logic_error("arrival_init_open: corrupt state-update step");
    // Returning node: zero mass, state frozen at the last refresh (or at the
    // values its first activation installed, if it never ran a remaining
    // step before leaving).
    return {MassPair{0, 0}, record.state};
}

}  // namespace omas
