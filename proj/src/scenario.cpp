#include "omas/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace omas {

const char* to_string(DelayDistribution d) {
    return d == DelayDistribution::HalfZero ? "half_zero" : "uniform";
}

DelayDistribution delay_distribution_from_string(const std::string& s) {
    if (s == "half_zero") return DelayDistribution::HalfZero;
    if (s == "uniform") return DelayDistribution::Uniform;
    throw std::invalid_argument("unknown delay distribution: " + s +
                                " (expected half_zero|uniform)");
}

std::int64_t ScenarioConfig::churn_rate_ppm() const {
    return std::llround(churn_rate * 1e6);
}

std::int64_t ScenarioConfig::perturb_up_ppm() const {
    return std::llround(perturb_up_prob * 1e6);
}

void ScenarioConfig::validate() const {
    if (n_total < 1) throw std::invalid_argument("config: n_total must be >= 1");
    if (n_active_initial < 1 || n_active_initial > n_total)
        throw std::invalid_argument("config: n_active_initial must be in [1, n_total]");
    if (churn_rate < 0.0 || churn_rate > 1.0)
        throw std::invalid_argument("config: churn_rate must be in [0, 1]");
    if (perturb_up_prob < 0.0 || perturb_up_prob > 1.0)
        throw std::invalid_argument("config: perturb_up_prob must be in [0, 1]");
    if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
    if (stabilization_step && (*stabilization_step < 0 || *stabilization_step >= horizon))
        throw std::invalid_argument("config: horizon must exceed stabilization_step");
    if (instance_count < 1) throw std::invalid_argument("config: instance_count must be >= 1");
    if (tau_bar < 0) throw std::invalid_argument("config: tau_bar must be >= 0");
    if (!tau_bar_per_node.empty() && (int)tau_bar_per_node.size() != n_total)
        throw std::invalid_argument("config: tau_bar_per_node must have n_total entries");
    for (int t : tau_bar_per_node)
        if (t < 0) throw std::invalid_argument("config: per-node tau_bar must be >= 0");
    if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
    if (x_min > x_max) throw std::invalid_argument("config: x_min must be <= x_max");
}

namespace {

ScenarioConfig paper_scale_base() {
    ScenarioConfig c;
    c.n_total = 150;
    c.n_active_initial = 100;
    c.churn_rate = 0.10;
    c.perturb_up_prob = 0.55;
    c.stabilization_step = 80;
    c.instance_count = 20;
    c.tau_bar = 5;
    c.horizon = 300;
    c.runs = 100;
    return c;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
    if (name == "scenario1") return paper_scale_base();
    if (name == "scenario2a") return paper_scale_base();
    if (name == "scenario2b") {
        ScenarioConfig c = paper_scale_base();
        c.n_total = 300;
        c.n_active_initial = 250;
        return c;
    }
    if (name == "scenario2c") {
        ScenarioConfig c = paper_scale_base();
        c.n_total = 600;
        c.n_active_initial = 500;
        return c;
    }
    if (name == "scenario3a") return paper_scale_base();
    if (name == "scenario3b") {
        ScenarioConfig c = paper_scale_base();
        c.churn_rate = 0.50;
        return c;
    }
    std::ostringstream msg;
    msg << "unknown preset '" << name << "'; known presets:";
    for (const auto& p : preset_names()) msg << ' ' << p;
    throw std::invalid_argument(msg.str());
}

std::vector<std::string> preset_names() {
    return {"scenario1", "scenario2a", "scenario2b", "scenario2c", "scenario3a", "scenario3b"};
}

std::string config_to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["n_total"] = cfg.n_total;
    j["n_active_initial"] = cfg.n_active_initial;
    j["churn_rate"] = cfg.churn_rate;
    j["perturb_up_prob"] = cfg.perturb_up_prob;
    if (cfg.stabilization_step)
        j["stabilization_step"] = *cfg.stabilization_step;
    else
        j["stabilization_step"] = nullptr;
    j["instance_count"] = cfg.instance_count;
    j["tau_bar"] = cfg.tau_bar;
    if (!cfg.tau_bar_per_node.empty()) j["tau_bar_per_node"] = cfg.tau_bar_per_node;
    j["delay_distribution"] = to_string(cfg.delay_distribution);
    j["horizon"] = cfg.horizon;
    j["runs"] = cfg.runs;
    j["algorithm"] = to_string(cfg.algorithm);
    j["violate_departure_condition"] = cfg.violate_departure_condition;
    j["x_min"] = cfg.x_min;
    j["x_max"] = cfg.x_max;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["write_traces"] = cfg.write_traces;
    return j.dump(2);
}

ScenarioConfig config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ScenarioConfig cfg;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key) && !j[key].is_null()) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("n_total", cfg.n_total);
    get("n_active_initial", cfg.n_active_initial);
    get("churn_rate", cfg.churn_rate);
    get("perturb_up_prob", cfg.perturb_up_prob);
    if (j.contains("stabilization_step") && !j["stabilization_step"].is_null())
        cfg.stabilization_step = j["stabilization_step"].get<int>();
    get("instance_count", cfg.instance_count);
    get("tau_bar", cfg.tau_bar);
    get("tau_bar_per_node", cfg.tau_bar_per_node);
    if (j.contains("delay_distribution"))
        cfg.delay_distribution =
            delay_distribution_from_string(j["delay_distribution"].get<std::string>());
    get("horizon", cfg.horizon);
    get("runs", cfg.runs);
    if (j.contains("algorithm")) cfg.algorithm = algorithm_from_string(j["algorithm"].get<std::string>());
    get("violate_departure_condition", cfg.violate_departure_condition);
    get("x_min", cfg.x_min);
    get("x_max", cfg.x_max);
    get("seed", cfg.seed);
    get("out_dir", cfg.out_dir);
    get("write_traces", cfg.write_traces);
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

}  // namespace omas
