#include "omas/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace omas {

void DelayQueue::push(const TransmissionMessage& msg) {
    pending_[msg.deliver_step].push_back(msg);
    inflight_y_ += msg.c_y;
    inflight_z_ += msg.c_z;
}

std::vector<TransmissionMessage> DelayQueue::take_due(int k) {
    auto it = pending_.find(k);
    if (it == pending_.end()) return {};
    std::vector<TransmissionMessage> due = std::move(it->second);
    pending_.erase(it);
    for (const auto& m : due) {
        inflight_y_ -= m.c_y;
        inflight_z_ -= m.c_z;
    }
    return due;
}

bool DelayQueue::empty() const {
    return pending_.empty();
}

std::map<NodeId, std::vector<MassPair>> deliver_due(DelayQueue& queue, int k) {
    std::map<NodeId, std::vector<MassPair>> grouped;
    for (const auto& m : queue.take_due(k)) grouped[m.to].push_back({m.c_y, m.c_z});
    return grouped;
}

int draw_processing_delay(int tau_bar, DelayDistribution dist, Rng& rng) {
    if (tau_bar == 0) return 0;
    if (dist == DelayDistribution::HalfZero) {
        if (rng.bernoulli(1, 2)) return 0;
        return 1 + (int)rng.uniform_below((std::uint64_t)tau_bar);
    }
    return (int)rng.uniform_below((std::uint64_t)tau_bar + 1);
}

namespace {

std::vector<NodeId> intersect_sorted(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::vector<NodeId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

template <typename Fn>
void for_each_ordered(const std::vector<NodeId>& nodes, NodeOrder order, Fn&& fn) {
    if (order == NodeOrder::Ascending) {
        for (auto it = nodes.begin(); it != nodes.end(); ++it) fn(*it);
    } else {
        for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) fn(*it);
    }
}

}  // namespace

RunInputs prepare_inputs(const ScenarioConfig& cfg, AlgorithmKind kind, std::uint64_t seed) {
    cfg.validate();
    ScenarioConfig effective = cfg;
    if (kind == AlgorithmKind::QAIOD) effective.stabilization_step.reset();  // stays open

    RunInputs inputs;
    Rng x_rng = Rng::stream(seed, "init-x");
    inputs.x.resize(cfg.n_total);
    for (auto& v : inputs.x) v = x_rng.uniform_int(cfg.x_min, cfg.x_max);

    Rng sched_rng = Rng::stream(seed, "schedule");
    inputs.schedule = generate_membership_schedule(effective, sched_rng);
    inputs.knowledge = DepartureKnowledge::from_schedule(inputs.schedule, effective);

    Rng topo_rng = Rng::stream(seed, "topology");
    inputs.topology =
        generate_topology_sequence(inputs.schedule, inputs.knowledge, effective, kind, topo_rng);
    return inputs;
}

Trace simulate(const ScenarioConfig& cfg, AlgorithmKind kind, std::uint64_t seed, RunInputs inputs,
               NodeOrder order) {
    const int n_total = cfg.n_total;
    const int horizon = inputs.schedule.horizon;
    inputs.schedule.validate();
    inputs.topology.validate(inputs.schedule);
    if ((int)inputs.x.size() != n_total)
        throw std::invalid_argument("simulate: x vector size mismatch");

    Trace trace;
    trace.kind = kind;
    trace.seed = seed;
    trace.config = cfg;
    trace.x = inputs.x;
    trace.tau_bar.resize(n_total);
    for (NodeId v = 0; v < (NodeId)n_total; ++v) trace.tau_bar[v] = cfg.tau_bar_for(v);
    trace.schedule = inputs.schedule;
    trace.topology = inputs.topology;
    trace.steps.reserve(horizon + 1);

    const auto& sched = trace.schedule;
    const auto& x = trace.x;

    std::vector<NodeRecord> records(n_total);
    for (NodeId v = 0; v < (NodeId)n_total; ++v) {
        records[v].id = v;
        records[v].x = x[v];
        records[v].mass = MassPair{2 * x[v], 2};
        records[v].state = StateTriple{2 * x[v], 2, x[v]};
        records[v].eta = !sched.is_active(v, 0);
    }

    std::vector<Rng> streams;
    streams.reserve(n_total);
    for (NodeId v = 0; v < (NodeId)n_total; ++v) streams.push_back(Rng::stream(seed, "node", v));

    DelayQueue queue;
    HistoricalSet historical;
    historical.add(sched.active[0]);

    auto snapshot = [&](int k, const std::vector<Mode>& modes) {
        StepRecord rec;
        rec.k = k;
        const auto& active = sched.active[k];
        std::int64_t mass_y = 0, mass_z = 0;
        std::vector<MassPair> ratio_masses;
        ratio_masses.reserve(active.size());
        for (NodeId v : active) {
            const auto& r = records[v];
            rec.nodes.push_back({v, r.mass.y, r.mass.z, r.state.y_s, r.state.z_s, r.state.q_s,
                                 modes.empty() ? Mode::Inactive : modes[v]});
            mass_y += r.mass.y;
            mass_z += r.mass.z;
            if (r.mass.z >= 1) ratio_masses.push_back(r.mass);
        }
        rec.inflight_y = queue.inflight_y();
        rec.inflight_z = queue.inflight_z();
        rec.total_y = mass_y + rec.inflight_y;
        rec.total_z = mass_z + rec.inflight_z;
        if (kind == AlgorithmKind::QAIOD) {
            std::int64_t hist_sum = 0;
            for (NodeId v : historical.members()) hist_sum += x[v];
            rec.expected_y = 2 * hist_sum;
            rec.expected_z = 2 * (std::int64_t)historical.members().size();
            rec.q_target = historical_average(x, historical);
        } else {
            std::int64_t active_sum = 0;
            for (NodeId v : active) active_sum += x[v];
            rec.expected_y = 2 * active_sum;
            rec.expected_z = 2 * (std::int64_t)active.size();
            rec.q_target = active_average(x, active);
        }
        rec.conservation_ok =
            audit_mass_conservation(rec.total_y, rec.total_z, rec.expected_y, rec.expected_z);
        rec.epsilon = epsilon(ratio_masses, rec.q_target);
        return rec;
    };

    for (int k = 0; k < horizon; ++k) {
        if (k > 0) historical.add(sched.active[k]);

        StepSets sets = node_sets_at(sched, inputs.knowledge, k);
        std::vector<Mode> modes(n_total, Mode::Inactive);
        for (NodeId v : sched.active[k]) modes[v] = classify_mode(kind, v, sets);

        StepRecord rec = snapshot(k, modes);

        Adjacency adj(trace.topology.per_step[k], n_total);
        const std::vector<NodeId>& handoff_set =
            (kind == AlgorithmKind::QAPOD) ? sets.long_term_remaining : sets.remaining;

        auto delivered = deliver_due(queue, k);
        for (const auto& [to, msgs] : delivered)
            if (!sched.is_active(to, k))
                throw std::logic_error("engine: message delivered to inactive node " +
                                       std::to_string(to) + " at step " + std::to_string(k));

        // Mass accumulated for each node's k+1 merge: zero-delay traffic
        // lands here during the round.
        std::vector<MassPair> incoming(n_total);
        std::vector<MassPair> base(n_total);
        std::vector<TransmissionMessage> emitted;

        auto route = [&](const TransmissionMessage& msg) {
            emitted.push_back(msg);
            if (msg.deliver_step == msg.emit_step)
                incoming[msg.to] += MassPair{msg.c_y, msg.c_z};
            else
                queue.push(msg);
        };

        // Arrivals initialize now; the values take effect at k+1 and nothing
        // reads them during this round.
        for_each_ordered(sets.arriving, order, [&](NodeId v) {
            if (kind == AlgorithmKind::QAIOD) {
                records[v] = step_qaiod(records[v], Mode::Arriving, {}, {}, k, streams[v]).node;
            } else {
                auto [mass, state] = arrival_init(x[v]);
                records[v].mass = mass;
                records[v].state = state;
            }
        });

        // Departures hand off before any remaining node splits, so the
        // handoff joins the same k+1 merge as ordinary traffic.
        for_each_ordered(sets.departing, order, [&](NodeId v) {
            std::vector<MassPair> inbox;
            auto it = delivered.find(v);
            if (it != delivered.end()) {
                inbox = std::move(it->second);
                delivered.erase(it);  // consumed by the handoff
            }
            std::vector<NodeId> qualifying = intersect_sorted(adj.out(v), handoff_set);
            try {
                StepOutcome out;
                switch (kind) {
                    case AlgorithmKind::QAOD:
                        out = step_departing_qaod(records[v], qualifying, inbox, k, streams[v]);
                        break;
                    case AlgorithmKind::QAPOD:
                        out = step_qapod(records[v], Mode::Departing, qualifying, inbox, 0, k,
                                         streams[v]);
                        break;
                    case AlgorithmKind::QAIOD:
                        out = step_qaiod(records[v], Mode::Departing, qualifying, inbox, k,
                                         streams[v]);
                        break;
                }
                records[v] = out.node;
                for (const auto& msg : out.messages) route(msg);
            } catch (const DepartureConditionViolated&) {
                records[v].mass = MassPair{0, 0};  // information lost; audits will show it
                rec.violations.push_back(v);
                trace.violation_steps.push_back(k);
            }
        });

        const std::vector<NodeId>& actors =
            (kind == AlgorithmKind::QAPOD) ? sets.long_term_remaining : sets.remaining;
        for_each_ordered(actors, order, [&](NodeId v) {
            std::vector<NodeId> targets = intersect_sorted(adj.out(v), handoff_set);
            // The delay belongs to this round's emissions and precedes the
            // split draws on the node's stream; token-less nodes emit
            // nothing and draw nothing.
            int delay = (kind == AlgorithmKind::QAPOD && records[v].mass.z >= 1)
                            ? draw_processing_delay(trace.tau_bar[v], cfg.delay_distribution,
                                                    streams[v])
                            : 0;
            StepOutcome out;
            switch (kind) {
                case AlgorithmKind::QAOD:
                    out = step_remaining_qaod(records[v], targets, {}, k, streams[v]);
                    break;
                case AlgorithmKind::QAPOD:
                    out = step_qapod(records[v], Mode::LongTermRemaining, targets, {}, delay, k,
                                     streams[v]);
                    break;
                case AlgorithmKind::QAIOD:
                    out = step_qaiod(records[v], Mode::Remaining, targets, {}, k, streams[v]);
                    break;
            }
            base[v] = out.node.mass;  // the kept share; deliveries merge at commit
            records[v] = out.node;
            for (const auto& msg : out.messages) route(msg);
        });
        if (kind == AlgorithmKind::QAPOD)
            for (NodeId v : sets.departing_soon) base[v] = records[v].mass;  // absorb only

        // Commit: masses at k+1 are the kept piece plus everything delivered
        // during this round.
        for (NodeId v : sched.active[k + 1]) {
            if (std::binary_search(sets.arriving.begin(), sets.arriving.end(), v)) {
                // senders only ever target nodes active at both k and k+1
                if (!(incoming[v] == MassPair{0, 0}) || delivered.count(v))
                    throw std::logic_error("engine: traffic addressed to a node arriving at step " +
                                           std::to_string(k));
                continue;
            }
            MassPair total = base[v] + incoming[v];
            auto it = delivered.find(v);
            if (it != delivered.end()) total = merge_received(total, it->second);
            records[v].mass = total;
        }

        std::sort(emitted.begin(), emitted.end(), [](const auto& a, const auto& b) {
            return std::tie(a.from, a.to) < std::tie(b.from, b.to);
        });
        rec.emitted = std::move(emitted);
        std::sort(rec.violations.begin(), rec.violations.end());
        trace.steps.push_back(std::move(rec));
    }

    // Terminal snapshot: no further churn is defined, so every active node
    // reads as (long-term) remaining.
    historical.add(sched.active[horizon]);
    std::vector<Mode> final_modes(n_total, Mode::Inactive);
    for (NodeId v : sched.active[horizon])
        final_modes[v] =
            (kind == AlgorithmKind::QAPOD) ? Mode::LongTermRemaining : Mode::Remaining;
    trace.steps.push_back(snapshot(horizon, final_modes));

    std::sort(trace.violation_steps.begin(), trace.violation_steps.end());
    trace.violation_steps.erase(
        std::unique(trace.violation_steps.begin(), trace.violation_steps.end()),
        trace.violation_steps.end());
    return trace;
}

Trace run(const ScenarioConfig& cfg, AlgorithmKind kind, std::uint64_t seed) {
    return simulate(cfg, kind, seed, prepare_inputs(cfg, kind, seed));
}

RunMetrics extract_metrics(const Trace& trace) {
    RunMetrics m;
    m.horizon = trace.schedule.horizon;
    m.epsilon.reserve(trace.steps.size());
    for (const auto& step : trace.steps) {
        m.epsilon.push_back(step.epsilon);
        m.target.push_back(step.q_target);
        m.n_active.push_back((int)step.nodes.size());
        if (!step.conservation_ok) {
            m.all_conservation_ok = false;
            if (!m.first_audit_failure) m.first_audit_failure = step.k;
        }
    }
    m.convergence = convergence_step(m.epsilon);
    m.violation_steps = trace.violation_steps;
    return m;
}

}  // namespace omas
