#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omas/engine.hpp"
#include "omas/metrics.hpp"

namespace omas {

std::string trace_to_json(const Trace& trace);
Trace trace_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Per-step summary: k, n_active, q_target_num, q_target_den, epsilon,
// sum_y, sum_z, violations.
std::string trace_to_csv(const Trace& trace);

// Aggregated per-step summary across runs: k, epsilon_mean, epsilon_min,
// epsilon_max, n_active, q_target_num, q_target_den. The target columns
// carry the first run's target, which is representative when runs share a
// schedule and indicative otherwise.
std::string summary_to_csv(const AggregateSummary& summary, const std::vector<RunMetrics>& runs);

std::string summary_to_json(const AggregateSummary& summary, const std::vector<RunMetrics>& runs,
                            const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds);

struct ReplayAuditResult {
    bool ok = true;                       // conservation holds at every step
    std::optional<int> first_failure;    // first step where re-summation disagrees with the target sums
    bool matches_recorded_audit = true;  // recorded per-step flags agree with the replay
    bool epsilon_matches = true;         // recorded epsilon agrees with recomputation
    std::string detail;
};

// From-scratch audit of a saved trace: rebuilds the in-flight totals from
// the raw message log and the expected sums from the initial states and
// schedule, never trusting the engine's own accumulators.
ReplayAuditResult replay_audit(const Trace& trace);

struct GraphCheckResult {
    bool departure_condition_ok = true;             // every departing node could hand off
    std::vector<int> violating_steps;               // steps where it failed
    bool matches_recorded_violations = true;        // equals what the run reported
    std::optional<bool> stable_phase_T_joint;       // set when the run has a stable phase
    std::string detail;
};

// Re-derives the topological conditions from a saved trace.
GraphCheckResult graph_check(const Trace& trace);

}  // namespace omas
