#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "omas/algorithms.hpp"
#include "omas/membership.hpp"
#include "omas/metrics.hpp"
#include "omas/protocol.hpp"
#include "omas/rational.hpp"
#include "omas/scenario.hpp"
#include "omas/topology.hpp"
#include "omas/types.hpp"

namespace omas {

// Messages parked between emission and delivery, bucketed by deliver step.
// Zero-delay traffic never enters the queue; it is routed inside the round.
class DelayQueue {
  public:
    void push(const TransmissionMessage& msg);
    std::vector<TransmissionMessage> take_due(int k);
    std::int64_t inflight_y() const { return inflight_y_; }
    std::int64_t inflight_z() const { return inflight_z_; }
    bool empty() const;

  private:
    std::map<int, std::vector<TransmissionMessage>> pending_;
    std::int64_t inflight_y_ = 0;
    std::int64_t inflight_z_ = 0;
};

// Removes everything due exactly at step k, grouped by receiver.
std::map<NodeId, std::vector<MassPair>> deliver_due(DelayQueue& queue, int k);

// Integer delay in [0, tau_bar] under the configured distribution.
int draw_processing_delay(int tau_bar, DelayDistribution dist, Rng& rng);

struct StepNodeState {
    NodeId id = 0;
    std::int64_t y = 0, z = 0;
    std::int64_t y_s = 0, z_s = 0, q_s = 0;
    Mode mode = Mode::Inactive;
};

// Snapshot taken at the start of each round, before any churn or traffic for
// that step is applied.
struct StepRecord {
    int k = 0;
    std::vector<StepNodeState> nodes;            // active nodes, ascending id
    std::vector<TransmissionMessage> emitted;    // canonical (from, to) order
    std::int64_t inflight_y = 0, inflight_z = 0;
    std::int64_t total_y = 0, total_z = 0;       // active mass + in-flight
    std::int64_t expected_y = 0, expected_z = 0;
    bool conservation_ok = true;
    Rational q_target;
    std::int64_t epsilon = 0;
    std::vector<NodeId> violations;              // departure-condition failures this step
};

struct Trace {
    AlgorithmKind kind = AlgorithmKind::QAOD;
    std::uint64_t seed = 0;
    ScenarioConfig config;
    std::vector<std::int64_t> x;
    std::vector<int> tau_bar;
    MembershipSchedule schedule;
    TopologySequence topology;
    std::vector<StepRecord> steps;  // horizon + 1 records; the last is a terminal snapshot
    std::vector<int> violation_steps;
};

struct RunInputs {
    MembershipSchedule schedule;
    TopologySequence topology;
    DepartureKnowledge knowledge;
    std::vector<std::int64_t> x;
};

enum class NodeOrder { Ascending, Descending };

// Generates the world for one seeded run: initial states, churn schedule,
// departure knowledge and conforming topology. The indefinitely-open
// algorithm ignores the stabilization step (its schedule churns throughout).
RunInputs prepare_inputs(const ScenarioConfig& cfg, AlgorithmKind kind, std::uint64_t seed);

// Executes the round loop on prepared inputs. The iteration order knob only
// exists to demonstrate that results do not depend on it.
Trace simulate(const ScenarioConfig& cfg, AlgorithmKind kind, std::uint64_t seed, RunInputs inputs,
               NodeOrder order = NodeOrder::Ascending);

Trace run(const ScenarioConfig& cfg, AlgorithmKind kind, std::uint64_t seed);

RunMetrics extract_metrics(const Trace& trace);

}  // namespace omas
