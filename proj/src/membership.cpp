#include "omas/membership.hpp"

#include <algorithm>
#include <stdexcept>

namespace omas {

namespace {

std::vector<NodeId> set_difference(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<NodeId> set_intersection(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

bool MembershipSchedule::is_active(NodeId v, int k) const {
    const auto& s = active[k];
    return std::binary_search(s.begin(), s.end(), v);
}

std::vector<NodeId> MembershipSchedule::remaining_at(int k) const {
    return set_intersection(active[k], active[k + 1]);
}

std::vector<NodeId> MembershipSchedule::arriving_at(int k) const {
    return set_difference(active[k + 1], active[k]);
}

std::vector<NodeId> MembershipSchedule::departing_at(int k) const {
    return set_difference(active[k], active[k + 1]);
}

void MembershipSchedule::validate() const {
    if ((int)active.size() != horizon + 1)
        throw std::invalid_argument("schedule: expected horizon+1 active sets");
    for (const auto& s : active) {
        if (!std::is_sorted(s.begin(), s.end()))
            throw std::invalid_argument("schedule: active sets must be sorted");
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("schedule: duplicate node in active set");
    }
    if (stabilization_step) {
        for (int k = *stabilization_step; k <= horizon; ++k)
            if (active[k] != active[*stabilization_step])
                throw std::invalid_argument("schedule: active set churns past stabilization step");
    }
}

DepartureKnowledge DepartureKnowledge::from_schedule(const MembershipSchedule& sched,
                                                     const ScenarioConfig& cfg) {
    DepartureKnowledge k;
    k.departure_steps.resize(cfg.n_total);
    k.tau_bar.resize(cfg.n_total);
    for (NodeId v = 0; v < (NodeId)cfg.n_total; ++v) k.tau_bar[v] = cfg.tau_bar_for(v);
    for (int s = 0; s < sched.horizon; ++s)
        for (NodeId v : sched.departing_at(s)) k.departure_steps[v].push_back(s);
    return k;
}

std::optional<int> DepartureKnowledge::next_departure(NodeId v, int k) const {
    const auto& steps = departure_steps[v];
    auto it = std::lower_bound(steps.begin(), steps.end(), k);
    if (it == steps.end()) return std::nullopt;
    return *it;
}

std::optional<std::pair<int, int>> DepartureKnowledge::rho_bounds(NodeId v, int k) const {
    auto dep = next_departure(v, k + 1);
    if (!dep) return std::nullopt;
    int rho_l = *dep - k;
    return std::make_pair(rho_l, rho_l + 1);
}

StepSets node_sets_at(const MembershipSchedule& sched, const DepartureKnowledge& knowledge, int k) {
    StepSets sets;
    sets.remaining = sched.remaining_at(k);
    sets.arriving = sched.arriving_at(k);
    sets.departing = sched.departing_at(k);
    for (NodeId v : sets.remaining) {
        auto dep = knowledge.next_departure(v, k + 1);
        if (dep && *dep - k <= knowledge.tau_bar[v])
            sets.departing_soon.push_back(v);
        else
            sets.long_term_remaining.push_back(v);
    }
    return sets;
}

namespace {

// round-half-up of n * rate_ppm / 1e6, all in integers
std::int64_t scaled_count(std::int64_t n, std::int64_t rate_ppm) {
    return (n * rate_ppm + 500000) / 1000000;
}

std::vector<NodeId> sample_without_replacement(const std::vector<NodeId>& pool, std::int64_t count,
                                               Rng& rng) {
    std::vector<NodeId> copy = pool;
    std::vector<NodeId> picked;
    picked.reserve(count);
    for (std::int64_t i = 0; i < count; ++i) {
        std::size_t j = (std::size_t)rng.uniform_below(copy.size());
        picked.push_back(copy[j]);
        copy[j] = copy.back();
        copy.pop_back();
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

MembershipSchedule generate_membership_schedule(const ScenarioConfig& cfg, Rng& rng) {
    cfg.validate();
    MembershipSchedule sched;
    sched.horizon = cfg.horizon;
    sched.stabilization_step = cfg.stabilization_step;
    sched.active.reserve(cfg.horizon + 1);

    std::vector<NodeId> current(cfg.n_active_initial);
    for (int i = 0; i < cfg.n_active_initial; ++i) current[i] = (NodeId)i;
    sched.active.push_back(current);

    const std::int64_t rate_ppm = cfg.churn_rate_ppm();
    const std::int64_t up_ppm = cfg.perturb_up_ppm();
    std::vector<NodeId> all(cfg.n_total);
    for (int i = 0; i < cfg.n_total; ++i) all[i] = (NodeId)i;

    for (int k = 0; k < cfg.horizon; ++k) {
        bool churn = rate_ppm > 0 &&
                     (!cfg.stabilization_step || k < *cfg.stabilization_step);
        if (!churn) {
            sched.active.push_back(current);
            continue;
        }
        const std::int64_t n_k = (std::int64_t)current.size();
        const std::int64_t base = scaled_count(n_k, rate_ppm);

        std::vector<NodeId> departures = sample_without_replacement(current, std::min(base, n_k), rng);

        std::vector<NodeId> inactive = set_difference(all, current);
        std::int64_t arrivals;
        if ((std::int64_t)inactive.size() < base) {
            arrivals = (std::int64_t)inactive.size();  // pool exhausted: everyone joins
        } else {
            arrivals = base + (rng.bernoulli((std::uint64_t)up_ppm, 1000000) ? 1 : -1);
            arrivals = std::clamp<std::int64_t>(arrivals, 0, (std::int64_t)inactive.size());
        }
        std::vector<NodeId> joins = sample_without_replacement(inactive, arrivals, rng);

        std::vector<NodeId> next = set_difference(current, departures);
        next.insert(next.end(), joins.begin(), joins.end());
        std::sort(next.begin(), next.end());
        if (next.empty())
            throw std::runtime_error("schedule: active set became empty at step " + std::to_string(k + 1));
        current = std::move(next);
        sched.active.push_back(current);
    }
    sched.validate();
    return sched;
}

}  // namespace omas
