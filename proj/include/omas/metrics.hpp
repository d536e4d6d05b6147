#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "omas/protocol.hpp"
#include "omas/rational.hpp"
#include "omas/types.hpp"

namespace omas {

// Nodes active at least once so far; monotone in k.
class HistoricalSet {
  public:
    void add(std::span<const NodeId> nodes);
    bool contains(NodeId v) const;
    const std::vector<NodeId>& members() const { return members_; }

  private:
    std::vector<NodeId> members_;  // sorted
};

// Exact average of initial states over the given population.
Rational active_average(const std::vector<std::int64_t>& x, const std::vector<NodeId>& active);
Rational historical_average(const std::vector<std::int64_t>& x, const HistoricalSet& h);

// Aggregate deviation of the mass ratios from the floor/ceil band around the
// target: nodes above the band contribute ceil(y/z) - ceil(q), nodes below
// contribute floor(q) - floor(y/z). Entries must have z >= 1 (callers drop
// token-less nodes first; they have no ratio).
std::int64_t epsilon(const std::vector<MassPair>& masses, const Rational& q_target);

// True iff every reported estimate lies in {floor(q), ceil(q)}.
bool check_consensus(const std::vector<std::int64_t>& q_values, const Rational& q_target);

// Equivalent band test on a single mass ratio (epsilon == 0 iff every node
// passes this).
bool ratio_in_band(const MassPair& mass, const Rational& q_target);

bool audit_mass_conservation(std::int64_t total_y, std::int64_t total_z,
                             std::int64_t expected_y, std::int64_t expected_z);

// Smallest k with epsilon zero from there through the end of the series;
// transient zeros during churn do not count.
std::optional<int> convergence_step(const std::vector<std::int64_t>& epsilon_series);

struct RunMetrics {
    int horizon = 0;
    std::vector<std::int64_t> epsilon;  // one entry per recorded step
    std::vector<Rational> target;
    std::vector<int> n_active;
    std::optional<int> convergence;
    std::vector<int> violation_steps;
    std::optional<int> first_audit_failure;
    bool all_conservation_ok = true;
};

struct AggregateSummary {
    int horizon = 0;
    int run_count = 0;
    std::vector<Rational> epsilon_mean;
    std::vector<std::int64_t> epsilon_min;
    std::vector<std::int64_t> epsilon_max;
    std::vector<Rational> n_active_mean;
    int converged_runs = 0;
    std::optional<int> convergence_min;
    std::optional<int> convergence_median;
    std::optional<int> convergence_max;
    int total_violations = 0;
    int runs_with_audit_failures = 0;
};

// Per-step mean/min/max of epsilon plus the convergence-step distribution.
// All runs must share one horizon; an empty list is an error.
AggregateSummary aggregate(const std::vector<RunMetrics>& runs);

}  // namespace omas
