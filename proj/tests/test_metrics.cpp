#include "doctest.h"
#include "omas/metrics.hpp"

using namespace omas;

TEST_SUITE("metrics") {

TEST_CASE("active average is an exact rational") {
    std::vector<std::int64_t> x{1, 2, 3, 4};
    CHECK(active_average(x, {0, 1, 2, 3}) == Rational{5, 2});
    CHECK(active_average({7}, {0}) == Rational{7});
    CHECK(active_average({-1, 1}, {0, 1}) == Rational{0});
    CHECK_THROWS_AS(active_average(x, {}), std::invalid_argument);
}

TEST_CASE("historical average counts everyone who ever joined") {
    std::vector<std::int64_t> x{10, 20, 30};
    HistoricalSet h;
    h.add(std::vector<NodeId>{0});
    CHECK(historical_average(x, h) == Rational{10});
    h.add(std::vector<NodeId>{1});
    CHECK(historical_average(x, h) == Rational{15});
    h.add(std::vector<NodeId>{1});  // rejoining changes nothing
    CHECK(historical_average(x, h) == Rational{15});
    h.add(std::vector<NodeId>{2});
    CHECK(historical_average(x, h) == Rational{20});
    CHECK_THROWS_AS(historical_average(x, HistoricalSet{}), std::invalid_argument);
}

TEST_CASE("incremental historical set matches from-scratch recomputation") {
    std::vector<std::int64_t> x{3, 1, 4, 1, 5, 9};
    std::vector<std::vector<NodeId>> steps{{0, 1}, {1, 2}, {0, 4}, {5}, {3}};
    HistoricalSet inc;
    std::vector<NodeId> seen;
    for (const auto& s : steps) {
        inc.add(s);
        seen.insert(seen.end(), s.begin(), s.end());
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        HistoricalSet scratch;
        scratch.add(seen);
        CHECK(historical_average(x, inc) == historical_average(x, scratch));
    }
}

TEST_CASE("epsilon counts band deviations of mass ratios") {
    // ratios 4, 1, 2, 3 against q = 5/2: nodes above ceil contribute 4-3,
    // nodes below floor contribute 2-1
    std::vector<MassPair> masses{{4, 1}, {1, 1}, {2, 1}, {3, 1}};
    CHECK(epsilon(masses, Rational{5, 2}) == 2);
}

TEST_CASE("epsilon is zero exactly on the consensus band") {
    std::vector<MassPair> banded{{2, 1}, {3, 1}, {5, 2}};
    CHECK(epsilon(banded, Rational{5, 2}) == 0);
    std::vector<MassPair> exact{{3, 1}, {6, 2}};
    CHECK(epsilon(exact, Rational{3}) == 0);
}

TEST_CASE("epsilon equals zero iff every ratio is in the band (small enumeration)") {
    for (std::int64_t qn = -6; qn <= 6; ++qn) {
        for (std::int64_t qd = 1; qd <= 3; ++qd) {
            Rational q{qn, qd};
            for (std::int64_t y = -6; y <= 6; ++y) {
                for (std::int64_t z = 1; z <= 3; ++z) {
                    std::vector<MassPair> one{{y, z}};
                    CHECK((epsilon(one, q) == 0) == ratio_in_band({y, z}, q));
                }
            }
        }
    }
}

TEST_CASE("consensus check accepts only floor and ceil of the target") {
    CHECK(check_consensus({2, 3, 2}, Rational{5, 2}));
    CHECK_FALSE(check_consensus({2, 4}, Rational{5, 2}));
    CHECK(check_consensus({3, 3}, Rational{3}));
    CHECK_FALSE(check_consensus({2}, Rational{3}));
}

TEST_CASE("convergence step is the start of the zero suffix") {
    CHECK(convergence_step({3, 1, 0, 0, 0}) == 2);
    CHECK(convergence_step({0, 1, 0, 0}) == 2);  // transient zero does not count
    CHECK_FALSE(convergence_step({3, 1, 2}).has_value());
    CHECK(convergence_step({0, 0}) == 0);
    CHECK_FALSE(convergence_step({1, 0, 1}).has_value());
}

TEST_CASE("conservation audit is an exact comparison") {
    CHECK(audit_mass_conservation(60, 20, 60, 20));
    CHECK_FALSE(audit_mass_conservation(59, 20, 60, 20));
    CHECK_FALSE(audit_mass_conservation(60, 19, 60, 20));
}

TEST_CASE("aggregate means, extremes and convergence distribution") {
    RunMetrics a;
    a.horizon = 1;
    a.epsilon = {2, 0};
    a.target = {Rational{1}, Rational{1}};
    a.n_active = {4, 4};
    a.convergence = 1;
    RunMetrics b = a;
    b.epsilon = {0, 0};
    b.convergence = 0;

    auto s = aggregate({a, b});
    CHECK(s.epsilon_mean[0] == Rational{1});
    CHECK(s.epsilon_mean[1] == Rational{0});
    CHECK(s.epsilon_min[0] == 0);
    CHECK(s.epsilon_max[0] == 2);
    CHECK(s.converged_runs == 2);
    CHECK(s.convergence_min == 0);
    CHECK(s.convergence_max == 1);

    auto same = aggregate({a, a, a});
    CHECK(same.epsilon_mean[0] == Rational{2});
    CHECK(same.epsilon_min[0] == 2);
    CHECK(same.epsilon_max[0] == 2);

    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
    RunMetrics c = a;
    c.horizon = 5;
    c.epsilon = {1, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS(aggregate({a, c}), std::invalid_argument);
}

}  // TEST_SUITE
