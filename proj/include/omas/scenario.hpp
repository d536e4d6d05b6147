#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omas/types.hpp"

namespace omas {

// How a node's per-step processing delay is drawn from [0, tau_bar].
// HalfZero keeps half the rounds instantaneous and spreads the rest
// uniformly over {1..tau_bar}; Uniform draws uniformly over {0..tau_bar}.
enum class DelayDistribution { HalfZero, Uniform };

const char* to_string(DelayDistribution d);
DelayDistribution delay_distribution_from_string(const std::string& s);

// One simulation configuration. Serialized as a flat JSON document;
// command-line flags override file values, environment variables are never
// consulted.
struct ScenarioConfig {
    int n_total = 50;           // potential node set size
    int n_active_initial = 30;  // |V[0]|
    double churn_rate = 0.10;   // per-step departure and arrival rate
    double perturb_up_prob = 0.55;
    std::optional<int> stabilization_step;  // no churn from this step on
    int instance_count = 10;    // stable-phase topology instances
    int tau_bar = 0;            // global max processing delay (delay-aware runs)
    std::vector<int> tau_bar_per_node;  // optional override, size n_total
    DelayDistribution delay_distribution = DelayDistribution::HalfZero;
    int horizon = 300;
    int runs = 1;
    AlgorithmKind algorithm = AlgorithmKind::QAOD;
    bool violate_departure_condition = false;
    std::int64_t x_min = 1;  // initial states drawn uniformly from [x_min, x_max]
    std::int64_t x_max = 10;
    std::uint64_t seed = 1;
    std::string out_dir;
    bool write_traces = false;

    // Exact-integer views of the rate knobs (parts per million), used by the
    // generators so that counts never depend on floating-point rounding.
    std::int64_t churn_rate_ppm() const;
    std::int64_t perturb_up_ppm() const;

    int tau_bar_for(NodeId v) const {
        return tau_bar_per_node.empty() ? tau_bar : tau_bar_per_node[v];
    }

    void validate() const;  // throws std::invalid_argument
};

// Named configurations mirroring the experiment setups: scenario1,
// scenario2a..c, scenario3a..b. Throws with the list of known names.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace omas
