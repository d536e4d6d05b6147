#include "omas/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace omas {

namespace {

using nlohmann::json;

json digraph_to_json(const Digraph& g) {
    json edges = json::array();
    for (const auto& [from, to] : g.edges()) edges.push_back({from, to});
    return json{{"nodes", g.nodes()}, {"edges", edges}};
}

Digraph digraph_from_json(const json& j) {
    std::vector<NodeId> nodes = j.at("nodes").get<std::vector<NodeId>>();
    std::vector<Digraph::Edge> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
    return Digraph(std::move(nodes), std::move(edges));
}

}  // namespace

std::string trace_to_json(const Trace& trace) {
    json j;
    j["format"] = "omasqc-trace-v1";
    j["algorithm"] = to_string(trace.kind);
    j["seed"] = trace.seed;
    j["config"] = json::parse(config_to_json(trace.config));
    j["x"] = trace.x;
    j["tau_bar"] = trace.tau_bar;

    json sched;
    sched["horizon"] = trace.schedule.horizon;
    if (trace.schedule.stabilization_step)
        sched["stabilization_step"] = *trace.schedule.stabilization_step;
    else
        sched["stabilization_step"] = nullptr;
    sched["active"] = trace.schedule.active;
    j["schedule"] = std::move(sched);

    json topo = json::array();
    for (const auto& g : trace.topology.per_step) topo.push_back(digraph_to_json(g));
    j["topology"] = std::move(topo);

    json steps = json::array();
    for (const auto& s : trace.steps) {
        json rec;
        rec["k"] = s.k;
        json nodes = json::array();
        for (const auto& n : s.nodes)
            nodes.push_back({n.id, n.y, n.z, n.y_s, n.z_s, n.q_s, (int)n.mode});
        rec["nodes"] = std::move(nodes);
        json emitted = json::array();
        for (const auto& m : s.emitted)
            emitted.push_back({m.from, m.to, m.c_y, m.c_z, m.emit_step, m.deliver_step});
        rec["emitted"] = std::move(emitted);
        rec["inflight"] = {s.inflight_y, s.inflight_z};
        rec["total"] = {s.total_y, s.total_z};
        rec["expected"] = {s.expected_y, s.expected_z};
        rec["conservation_ok"] = s.conservation_ok;
        rec["q_target"] = {s.q_target.num(), s.q_target.den()};
        rec["epsilon"] = s.epsilon;
        rec["violations"] = s.violations;
        steps.push_back(std::move(rec));
    }
    j["steps"] = std::move(steps);
    j["violation_steps"] = trace.violation_steps;
    return j.dump(2);
}

Trace trace_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.at("format").get<std::string>() != "omasqc-trace-v1")
        throw std::runtime_error("trace: unsupported format");

    Trace trace;
    trace.kind = algorithm_from_string(j.at("algorithm").get<std::string>());
    trace.seed = j.at("seed").get<std::uint64_t>();
    trace.config = config_from_json(j.at("config").dump());
    trace.x = j.at("x").get<std::vector<std::int64_t>>();
    trace.tau_bar = j.at("tau_bar").get<std::vector<int>>();

    const auto& sched = j.at("schedule");
    trace.schedule.horizon = sched.at("horizon").get<int>();
    if (!sched.at("stabilization_step").is_null())
        trace.schedule.stabilization_step = sched.at("stabilization_step").get<int>();
    trace.schedule.active = sched.at("active").get<std::vector<std::vector<NodeId>>>();

    for (const auto& g : j.at("topology")) trace.topology.per_step.push_back(digraph_from_json(g));

    for (const auto& rec : j.at("steps")) {
        StepRecord s;
        s.k = rec.at("k").get<int>();
        for (const auto& n : rec.at("nodes")) {
            StepNodeState ns;
            ns.id = n[0].get<NodeId>();
            ns.y = n[1].get<std::int64_t>();
            ns.z = n[2].get<std::int64_t>();
            ns.y_s = n[3].get<std::int64_t>();
            ns.z_s = n[4].get<std::int64_t>();
            ns.q_s = n[5].get<std::int64_t>();
            ns.mode = (Mode)n[6].get<int>();
            s.nodes.push_back(ns);
        }
        for (const auto& m : rec.at("emitted")) {
            TransmissionMessage msg;
            msg.from = m[0].get<NodeId>();
            msg.to = m[1].get<NodeId>();
            msg.c_y = m[2].get<std::int64_t>();
            msg.c_z = m[3].get<std::int64_t>();
            msg.emit_step = m[4].get<int>();
            msg.deliver_step = m[5].get<int>();
            s.emitted.push_back(msg);
        }
        s.inflight_y = rec.at("inflight")[0].get<std::int64_t>();
        s.inflight_z = rec.at("inflight")[1].get<std::int64_t>();
        s.total_y = rec.at("total")[0].get<std::int64_t>();
        s.total_z = rec.at("total")[1].get<std::int64_t>();
        s.expected_y = rec.at("expected")[0].get<std::int64_t>();
        s.expected_z = rec.at("expected")[1].get<std::int64_t>();
        s.conservation_ok = rec.at("conservation_ok").get<bool>();
        s.q_target = Rational{rec.at("q_target")[0].get<std::int64_t>(),
                              rec.at("q_target")[1].get<std::int64_t>()};
        s.epsilon = rec.at("epsilon").get<std::int64_t>();
        s.violations = rec.at("violations").get<std::vector<NodeId>>();
        trace.steps.push_back(std::move(s));
    }
    trace.violation_steps = j.at("violation_steps").get<std::vector<int>>();
    return trace;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trace_to_csv(const Trace& trace) {
    std::ostringstream out;
    out << "k,n_active,q_target_num,q_target_den,epsilon,sum_y,sum_z,violations\n";
    for (const auto& s : trace.steps) {
        out << s.k << ',' << s.nodes.size() << ',' << s.q_target.num() << ','
            << s.q_target.den() << ',' << s.epsilon << ',' << s.total_y << ',' << s.total_z << ','
            << s.violations.size() << '\n';
    }
    return out.str();
}

namespace {

// Fixed-point decimal with six places, computed by integer long division so
// CSV bytes never depend on floating-point formatting.
std::string rational_decimal(const Rational& r) {
    std::int64_t num = r.num();
    std::int64_t den = r.den();
    bool neg = num < 0;
    if (neg) num = -num;
    std::int64_t whole = num / den;
    std::int64_t rem = num % den;
    std::int64_t frac = (std::int64_t)(((__int128)rem * 1000000 + den / 2) / den);
    if (frac == 1000000) {
        ++whole;
        frac = 0;
    }
    std::ostringstream out;
    if (neg && (whole != 0 || frac != 0)) out << '-';
    out << whole << '.';
    std::string f = std::to_string(frac);
    out << std::string(6 - f.size(), '0') << f;
    return out.str();
}

}  // namespace

std::string summary_to_csv(const AggregateSummary& summary, const std::vector<RunMetrics>& runs) {
    std::ostringstream out;
    out << "k,epsilon_mean,epsilon_min,epsilon_max,n_active,q_target_num,q_target_den\n";
    const auto& first = runs.front();
    for (int k = 0; k < (int)summary.epsilon_mean.size(); ++k) {
        out << k << ',' << rational_decimal(summary.epsilon_mean[k]) << ','
            << summary.epsilon_min[k] << ',' << summary.epsilon_max[k] << ','
            << rational_decimal(summary.n_active_mean[k]) << ',' << first.target[k].num() << ','
            << first.target[k].den() << '\n';
    }
    return out.str();
}

std::string summary_to_json(const AggregateSummary& summary, const std::vector<RunMetrics>& runs,
                            const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds) {
    json j;
    j["config"] = json::parse(config_to_json(cfg));
    j["runs"] = summary.run_count;
    j["seeds"] = seeds;
    j["converged_runs"] = summary.converged_runs;
    if (summary.convergence_min) {
        j["convergence"] = {{"min", *summary.convergence_min},
                            {"median", *summary.convergence_median},
                            {"max", *summary.convergence_max}};
    } else {
        j["convergence"] = nullptr;
    }
    j["total_violations"] = summary.total_violations;
    j["runs_with_audit_failures"] = summary.runs_with_audit_failures;
    json per_run = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        json r;
        r["seed"] = seeds[i];
        r["convergence"] = runs[i].convergence ? json(*runs[i].convergence) : json(nullptr);
        r["violations"] = runs[i].violation_steps;
        r["first_audit_failure"] =
            runs[i].first_audit_failure ? json(*runs[i].first_audit_failure) : json(nullptr);
        per_run.push_back(std::move(r));
    }
    j["per_run"] = std::move(per_run);
    return j.dump(2);
}

ReplayAuditResult replay_audit(const Trace& trace) {
    ReplayAuditResult result;
    std::ostringstream detail;

    // In-flight payloads at step k are the logged messages with
    // emit < k <= deliver.
    std::vector<TransmissionMessage> log;
    for (const auto& s : trace.steps)
        log.insert(log.end(), s.emitted.begin(), s.emitted.end());

    HistoricalSet historical;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        historical.add(trace.schedule.active[k]);
        const auto& step = trace.steps[k];

        std::int64_t mass_y = 0, mass_z = 0;
        for (const auto& n : step.nodes) {
            mass_y += n.y;
            mass_z += n.z;
        }
        std::int64_t fly_y = 0, fly_z = 0;
        for (const auto& m : log)
            if (m.emit_step < (int)k && (int)k <= m.deliver_step) {
                fly_y += m.c_y;
                fly_z += m.c_z;
            }

        std::int64_t expected_y, expected_z;
        if (trace.kind == AlgorithmKind::QAIOD) {
            std::int64_t sum = 0;
            for (NodeId v : historical.members()) sum += trace.x[v];
            expected_y = 2 * sum;
            expected_z = 2 * (std::int64_t)historical.members().size();
        } else {
            std::int64_t sum = 0;
            for (NodeId v : trace.schedule.active[k]) sum += trace.x[v];
            expected_y = 2 * sum;
            expected_z = 2 * (std::int64_t)trace.schedule.active[k].size();
        }

        bool ok = (mass_y + fly_y == expected_y) && (mass_z + fly_z == expected_z);
        if (!ok && !result.first_failure) {
            result.ok = false;
            result.first_failure = (int)k;
            detail << "re-summation mismatch first appears at step " << k << " (mass+inflight=("
                   << mass_y + fly_y << ',' << mass_z + fly_z << "), expected=(" << expected_y
                   << ',' << expected_z << "))\n";
        }
        if (ok != step.conservation_ok) {
            result.matches_recorded_audit = false;
            detail << "recorded audit flag disagrees with replay at step " << k << "\n";
        }

        std::vector<MassPair> ratio_masses;
        for (const auto& n : step.nodes)
            if (n.z >= 1) ratio_masses.push_back({n.y, n.z});
        if (epsilon(ratio_masses, step.q_target) != step.epsilon) {
            result.epsilon_matches = false;
            detail << "recorded epsilon disagrees with recomputation at step " << k << "\n";
        }
    }
    result.detail = detail.str();
    return result;
}

GraphCheckResult graph_check(const Trace& trace) {
    GraphCheckResult result;
    std::ostringstream detail;

    ScenarioConfig effective = trace.config;
    effective.tau_bar_per_node = std::vector<int>(trace.tau_bar.begin(), trace.tau_bar.end());
    DepartureKnowledge knowledge = DepartureKnowledge::from_schedule(trace.schedule, effective);

    std::vector<int> violating;
    for (int k = 0; k < trace.schedule.horizon; ++k) {
        StepSets sets = node_sets_at(trace.schedule, knowledge, k);
        const std::vector<NodeId>& required = (trace.kind == AlgorithmKind::QAPOD)
                                                  ? sets.long_term_remaining
                                                  : sets.remaining;
        for (NodeId v : sets.departing) {
            bool ok = false;
            for (NodeId w : trace.topology.per_step[k].out_neighbors(v))
                if (std::binary_search(required.begin(), required.end(), w)) {
                    ok = true;
                    break;
                }
            if (!ok) {
                violating.push_back(k);
                detail << "departing node " << v << " has no qualifying out-neighbor at step " << k
                       << "\n";
            }
        }
    }
    std::sort(violating.begin(), violating.end());
    violating.erase(std::unique(violating.begin(), violating.end()), violating.end());
    result.departure_condition_ok = violating.empty();
    result.violating_steps = violating;
    result.matches_recorded_violations = (violating == trace.violation_steps);

    if (trace.schedule.stabilization_step) {
        int T = trace.config.instance_count;
        int from = *trace.schedule.stabilization_step;
        if (from + T <= trace.schedule.horizon)
            result.stable_phase_T_joint = verify_T_joint_connectivity(trace.topology, from, T);
    }
    result.detail = detail.str();
    return result;
}

}  // namespace omas
