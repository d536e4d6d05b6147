#include <algorithm>

#include "doctest.h"
#include "omas/membership.hpp"

using namespace omas;

namespace {

// Hand-build a schedule from explicit active sets.
MembershipSchedule sched_from(std::vector<std::vector<NodeId>> active) {
    MembershipSchedule s;
    s.horizon = (int)active.size() - 1;
    s.active = std::move(active);
    for (auto& a : s.active) std::sort(a.begin(), a.end());
    return s;
}

ScenarioConfig desk_config() {
    ScenarioConfig cfg;
    cfg.n_total = 50;
    cfg.n_active_initial = 30;
    cfg.churn_rate = 0.10;
    cfg.horizon = 120;
    cfg.stabilization_step = 60;
    return cfg;
}

}  // namespace

TEST_SUITE("membership") {

TEST_CASE("transition sets follow the set algebra") {
    // node 2 departs at step 0 ("leaves at step 1"), node 3 arrives
    MembershipSchedule s = sched_from({{0, 1, 2}, {0, 1, 3}, {0, 1, 3}});
    CHECK(s.departing_at(0) == std::vector<NodeId>{2});
    CHECK(s.arriving_at(0) == std::vector<NodeId>{3});
    CHECK(s.remaining_at(0) == std::vector<NodeId>{0, 1});
    // V[k+1] == (V[k] \ D[k]) ∪ A[k]
    auto rebuilt = s.remaining_at(0);
    auto arr = s.arriving_at(0);
    rebuilt.insert(rebuilt.end(), arr.begin(), arr.end());
    std::sort(rebuilt.begin(), rebuilt.end());
    CHECK(rebuilt == s.active[1]);
}

TEST_CASE("exact departure knowledge: window bounds") {
    MembershipSchedule s = sched_from({{0, 1}, {0, 1}, {0, 1}, {0}, {0}});
    ScenarioConfig cfg;
    cfg.n_total = 2;
    cfg.tau_bar = 5;
    auto knowledge = DepartureKnowledge::from_schedule(s, cfg);
    // node 1 in D[2]
    CHECK(knowledge.next_departure(1, 0) == 2);
    auto rho = knowledge.rho_bounds(1, 0);
    REQUIRE(rho.has_value());
    CHECK(rho->first == 2);
    CHECK(rho->second == 3);
    CHECK(rho->second > rho->first);
    CHECK(rho->first >= 1);
    CHECK_FALSE(knowledge.rho_bounds(0, 0).has_value());
}

TEST_CASE("node departing next step is in D[k], not R[k]") {
    MembershipSchedule s = sched_from({{0, 1}, {0}, {0}});
    auto d = s.departing_at(0);
    auto r = s.remaining_at(0);
    CHECK(std::binary_search(d.begin(), d.end(), (NodeId)1));
    CHECK_FALSE(std::binary_search(r.begin(), r.end(), (NodeId)1));
}

TEST_CASE("departure inside the delay horizon lands in S[k]") {
    // node 1 departs at step 3 (rho_l = 3 from step 0), tau_bar = 5
    MembershipSchedule s = sched_from({{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0}, {0}});
    ScenarioConfig cfg;
    cfg.n_total = 2;
    cfg.tau_bar = 5;
    auto knowledge = DepartureKnowledge::from_schedule(s, cfg);
    StepSets sets = node_sets_at(s, knowledge, 0);
    CHECK(sets.departing_soon == std::vector<NodeId>{1});
    CHECK(sets.long_term_remaining == std::vector<NodeId>{0});
}

TEST_CASE("departure beyond the delay horizon lands in R'[k]") {
    // node 1 departs at step 10, tau_bar = 5
    std::vector<std::vector<NodeId>> active(12, {0, 1});
    for (int k = 11; k < 12; ++k) active[k] = {0};
    MembershipSchedule s = sched_from(active);
    ScenarioConfig cfg;
    cfg.n_total = 2;
    cfg.tau_bar = 5;
    auto knowledge = DepartureKnowledge::from_schedule(s, cfg);
    StepSets sets = node_sets_at(s, knowledge, 0);
    CHECK(sets.long_term_remaining == std::vector<NodeId>{0, 1});
    CHECK(sets.departing_soon.empty());
}

TEST_CASE("generated schedule: 10% churn on 100 active nodes") {
    ScenarioConfig cfg;
    cfg.n_total = 150;
    cfg.n_active_initial = 100;
    cfg.churn_rate = 0.10;
    cfg.horizon = 40;
    Rng rng = Rng::stream(42, "schedule");
    auto s = generate_membership_schedule(cfg, rng);

    int up = 0, down = 0;
    for (int k = 0; k < cfg.horizon; ++k) {
        std::int64_t n_k = (std::int64_t)s.active[k].size();
        std::int64_t base = (n_k * 100000 + 500000) / 1000000;
        CHECK((std::int64_t)s.departing_at(k).size() == base);
        std::int64_t arr = (std::int64_t)s.arriving_at(k).size();
        std::int64_t inactive = cfg.n_total - n_k;
        if (inactive < base) {
            CHECK(arr == inactive);  // pool exhausted: everyone joins
        } else {
            CHECK((arr == base + 1 || arr == base - 1));
            (arr == base + 1 ? up : down)++;
        }
    }
    CHECK(up + down > 0);  // the +1/-1 perturbation is exercised
}

TEST_CASE("zero churn keeps the active set constant") {
    ScenarioConfig cfg = desk_config();
    cfg.churn_rate = 0.0;
    Rng rng = Rng::stream(7, "schedule");
    auto s = generate_membership_schedule(cfg, rng);
    for (int k = 0; k <= cfg.horizon; ++k) CHECK(s.active[k] == s.active[0]);
}

TEST_CASE("same seed reproduces the schedule, different seed does not") {
    ScenarioConfig cfg = desk_config();
    Rng a = Rng::stream(3, "schedule");
    Rng b = Rng::stream(3, "schedule");
    Rng c = Rng::stream(4, "schedule");
    auto s1 = generate_membership_schedule(cfg, a);
    auto s2 = generate_membership_schedule(cfg, b);
    auto s3 = generate_membership_schedule(cfg, c);
    CHECK(s1.active == s2.active);
    CHECK(s1.active != s3.active);
}

TEST_CASE("initial active count above the pool is rejected") {
    ScenarioConfig cfg = desk_config();
    cfg.n_active_initial = cfg.n_total + 1;
    Rng rng = Rng::stream(1, "schedule");
    CHECK_THROWS_AS(generate_membership_schedule(cfg, rng), std::invalid_argument);
}

TEST_CASE("no churn past the stabilization step") {
    ScenarioConfig cfg = desk_config();
    Rng rng = Rng::stream(11, "schedule");
    auto s = generate_membership_schedule(cfg, rng);
    for (int k = *cfg.stabilization_step; k <= cfg.horizon; ++k)
        CHECK(s.active[k] == s.active[*cfg.stabilization_step]);
}

TEST_CASE("S[k] and R'[k] partition R[k] on generated schedules") {
    ScenarioConfig cfg = desk_config();
    cfg.tau_bar = 5;
    Rng rng = Rng::stream(23, "schedule");
    auto s = generate_membership_schedule(cfg, rng);
    auto knowledge = DepartureKnowledge::from_schedule(s, cfg);
    for (int k = 0; k < cfg.horizon; ++k) {
        StepSets sets = node_sets_at(s, knowledge, k);
        std::vector<NodeId> merged = sets.departing_soon;
        merged.insert(merged.end(), sets.long_term_remaining.begin(),
                      sets.long_term_remaining.end());
        std::sort(merged.begin(), merged.end());
        CHECK(merged == sets.remaining);
        std::vector<NodeId> overlap;
        std::set_intersection(sets.departing_soon.begin(), sets.departing_soon.end(),
                              sets.long_term_remaining.begin(), sets.long_term_remaining.end(),
                              std::back_inserter(overlap));
        CHECK(overlap.empty());
    }
}

}  // TEST_SUITE
