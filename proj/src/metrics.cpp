#include "omas/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace omas {

void HistoricalSet::add(std::span<const NodeId> nodes) {
    std::vector<NodeId> merged;
    merged.reserve(members_.size() + nodes.size());
    std::merge(members_.begin(), members_.end(), nodes.begin(), nodes.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    members_ = std::move(merged);
}

bool HistoricalSet::contains(NodeId v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

Rational active_average(const std::vector<std::int64_t>& x, const std::vector<NodeId>& active) {
    if (active.empty()) throw std::invalid_argument("active_average: empty active set");
    std::int64_t sum = 0;
    for (NodeId v : active) sum += x[v];
    return Rational{sum, (std::int64_t)active.size()};
}

Rational historical_average(const std::vector<std::int64_t>& x, const HistoricalSet& h) {
    if (h.members().empty()) throw std::invalid_argument("historical_average: empty historical set");
    std::int64_t sum = 0;
    for (NodeId v : h.members()) sum += x[v];
    return Rational{sum, (std::int64_t)h.members().size()};
}

std::int64_t epsilon(const std::vector<MassPair>& masses, const Rational& q_target) {
    const std::int64_t q_floor = q_target.floor();
    const std::int64_t q_ceil = q_target.ceil();
    std::int64_t total = 0;
    for (const auto& m : masses) {
        if (m.z < 1) throw std::invalid_argument("epsilon: node without tokens has no ratio");
        std::int64_t r_ceil = ceil_div(m.y, m.z);
        std::int64_t r_floor = floor_div(m.y, m.z);
        if (r_ceil > q_ceil) total += r_ceil - q_ceil;
        if (r_floor < q_floor) total += q_floor - r_floor;
    }
    return total;
}

bool check_consensus(const std::vector<std::int64_t>& q_values, const Rational& q_target) {
    const std::int64_t lo = q_target.floor();
    const std::int64_t hi = q_target.ceil();
    return std::all_of(q_values.begin(), q_values.end(),
                       [&](std::int64_t q) { return q == lo || q == hi; });
}

bool ratio_in_band(const MassPair& mass, const Rational& q_target) {
    if (mass.z < 1) throw std::invalid_argument("ratio_in_band: node without tokens has no ratio");
    return ceil_div(mass.y, mass.z) <= q_target.ceil() &&
           floor_div(mass.y, mass.z) >= q_target.floor();
}

bool audit_mass_conservation(std::int64_t total_y, std::int64_t total_z,
                             std::int64_t expected_y, std::int64_t expected_z) {
    return total_y == expected_y && total_z == expected_z;
}

std::optional<int> convergence_step(const std::vector<std::int64_t>& epsilon_series) {
    if (epsilon_series.empty()) return std::nullopt;
    int first = -1;
    for (int k = (int)epsilon_series.size() - 1; k >= 0; --k) {
        if (epsilon_series[k] != 0) break;
        first = k;
    }
    if (first < 0) return std::nullopt;
    return first;
}

AggregateSummary aggregate(const std::vector<RunMetrics>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
    AggregateSummary s;
    s.horizon = runs.front().horizon;
    s.run_count = (int)runs.size();
    const std::size_t steps = runs.front().epsilon.size();
    for (const auto& r : runs) {
        if (r.horizon != s.horizon || r.epsilon.size() != steps)
            throw std::invalid_argument("aggregate: mixed horizons");
    }

    s.epsilon_mean.reserve(steps);
    s.epsilon_min.assign(steps, 0);
    s.epsilon_max.assign(steps, 0);
    s.n_active_mean.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        std::int64_t sum = 0, mn = runs.front().epsilon[k], mx = mn, n_sum = 0;
        for (const auto& r : runs) {
            sum += r.epsilon[k];
            mn = std::min(mn, r.epsilon[k]);
            mx = std::max(mx, r.epsilon[k]);
            n_sum += r.n_active[k];
        }
        s.epsilon_mean.push_back(Rational{sum, (std::int64_t)runs.size()});
        s.epsilon_min[k] = mn;
        s.epsilon_max[k] = mx;
        s.n_active_mean.push_back(Rational{n_sum, (std::int64_t)runs.size()});
    }

    std::vector<int> conv;
    for (const auto& r : runs) {
        if (r.convergence) conv.push_back(*r.convergence);
        s.total_violations += (int)r.violation_steps.size();
        if (!r.all_conservation_ok) ++s.runs_with_audit_failures;
    }
    s.converged_runs = (int)conv.size();
    if (!conv.empty()) {
        std::sort(conv.begin(), conv.end());
        s.convergence_min = conv.front();
        s.convergence_max = conv.back();
        s.convergence_median = conv[conv.size() / 2];
    }
    return s;
}

}  // namespace omas
