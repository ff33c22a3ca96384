#include <doctest.h>

#include "fttc/engine.hpp"
#include "fttc/errors.hpp"
#include "fttc/problem_io.hpp"
#include "support.hpp"

using namespace fttc;
using test::R;

TEST_CASE("example 1 step volumes and final assignment") {
    const Problem p = test::load("example1.json");
    const auto run = run_fttc(p, Policy::equal());
    const auto& steps = run.trace.steps;
    REQUIRE(steps.size() == 4);

    // step 1: only a and b are available and everyone points at a or a/b
    const auto& s1 = steps[0].solution;
    CHECK(s1.agent_volume == std::vector<Rational>{R("2/5"), R("2/5"), R("2/5")});
    CHECK(steps[0].exhausted == std::vector<ObjectId>{0});

    const auto& g2 = steps[1].graph;
    REQUIRE(g2.num_agents() == 3);
    CHECK(steps[1].solution.agent_volume == std::vector<Rational>{R("3/10"), R("1/10"), R("1/10")});

    const Assignment expected = test::assignment(p, {{"1", {{"b", "3/4"}, {"c", "1/4"}}},
                                                     {"2", {{"a", "1/2"}, {"b", "1/4"}, {"c", "1/4"}}},
                                                     {"3", {{"a", "1/2"}, {"c", "1/2"}}}});
    CHECK(run.assignment == expected);
    CHECK(replay(p, run.trace) == expected);
}

TEST_CASE("intro example trades a for b") {
    const Problem p = test::load("intro.json");
    const auto run = run_fttc(p, Policy::equal());
    CHECK(run.assignment == test::assignment(p, {{"i", {{"b", "1"}}}, {"j", {{"a", "1"}}}}));
    // step 2 relabels i's consumption of a
    REQUIRE(run.trace.steps.size() >= 2);
    const auto& st = run.trace.steps[1].state;
    CHECK(st.has_label(0, 0));
    CHECK(st.label_rounds.size() == 1);
}

TEST_CASE("policies agree with their definitions on a single object") {
    Problem p = test::load("example1.json");
    p.endowments(0, 0) = R("1/2");
    p.endowments(1, 0) = R("1/3");
    p.endowments(2, 0) = R("1/6");
    StepState s = pointing_stage(p, labeling_stage(p, initial_state(p)));

    const auto eq = make_parameters(Policy::equal(), p, s);
    CHECK(eq.ratio(0, 0) == R("1/3"));
    CHECK(eq.quota(2, 0) == R("1/6"));

    const auto pr = make_parameters(Policy::proportional(), p, s);
    CHECK(pr.ratio(0, 0) == R("1/2"));
    CHECK(pr.ratio(2, 0) == R("1/6"));

    const auto lv = make_parameters(Policy::leveling(), p, s);
    CHECK(lv.ratio(0, 0) == R("1"));
    CHECK(lv.ratio(1, 0) == R("0"));
    CHECK(lv.quota(0, 0) == R("1/6"));
    CHECK(lv.quota(1, 0) == R("0"));
    for (const auto* ps : {&eq, &pr, &lv}) CHECK_NOTHROW(validate_parameters(s, *ps));
}

TEST_CASE("every policy exhausts example 1 with full rows") {
    const Problem p = test::load("example1.json");
    for (const auto& pol : {Policy::equal(), Policy::proportional(), Policy::leveling(),
                            Policy::weighted("w", {R("1"), R("2"), R("3")})}) {
        const auto run = run_fttc(p, pol);
        for (AgentId i = 0; i < 3; ++i) CHECK(run.assignment.shares.row_sum(i) == R("1"));
        for (ObjectId o = 0; o < 3; ++o) CHECK(run.assignment.shares.col_sum(o) == R("1"));
    }
}

TEST_CASE("step budget") {
    const Problem p = test::load("example1.json");
    try {
        (void)run_fttc(p, Policy::equal(), RunOptions{2});
        FAIL("expected StepBudgetExceeded");
    } catch (const StepBudgetExceeded& e) {
        CHECK(e.trace().steps.size() == 2);
    }
}

TEST_CASE("invalid custom parameters are rejected") {
    const Problem p = test::load("example1.json");
    auto bad = Policy::custom("bad", [](const Problem& pr, const StepState& s) {
        auto params = make_parameters(Policy::equal(), pr, s);
        params.ratio(0, 0) = R("1/2");
        return params;
    });
    CHECK_THROWS_AS((void)run_fttc(p, bad), EngineError);
}

namespace {

std::vector<Problem> random_instances(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<Problem> out;
    std::uniform_int_distribution<std::size_t> size(1, 4);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t n = size(rng);
        std::uniform_int_distribution<std::size_t> msize(1, n);
        out.push_back(test::random_fee(rng, n, msize(rng)));
    }
    return out;
}

bool subset(const std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] && !b[k]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("trace invariants on random instances") {
    for (const auto& p : random_instances(11, 120)) {
        for (const auto& pol : {Policy::equal(), Policy::proportional(), Policy::leveling()}) {
            const auto run = run_fttc(p, pol);
            const auto& steps = run.trace.steps;
            REQUIRE_FALSE(steps.empty());
            for (std::size_t d = 0; d < steps.size(); ++d) {
                const auto& rec = steps[d];
                const auto& s = rec.state;
                if (d + 1 < steps.size()) CHECK(subset(steps[d + 1].state.available, s.available));

                for (ObjectId o = 0; o < p.num_objects(); ++o) {
                    Rational held;
                    for (AgentId i = 0; i < p.num_agents(); ++i) {
                        held += rec.endowments_after(i, o) + rec.assignment_after(i, o);
                        CHECK(rec.endowments_after(i, o) >= Rational(0));
                        CHECK(rec.assignment_after(i, o) >= Rational(0));
                    }
                    CHECK(held == p.supply(o));
                }
                for (AgentId i = 0; i < p.num_agents(); ++i) {
                    CHECK(rec.endowments_after.row_sum(i) + rec.assignment_after.row_sum(i) ==
                          p.endowments.row_sum(i));
                    for (ObjectId o : s.labels[i]) {
                        CHECK_FALSE(s.remaining[o]);
                        CHECK(s.assignment(i, o) > Rational(0));
                        CHECK(s.available[o]);
                    }
                }
                const auto& g = rec.graph;
                for (std::size_t k = 0; k < g.num_agents(); ++k) {
                    const auto& sol = rec.solution;
                    CHECK(sol.consumption_loss[k] + sol.net_consumption[k] == sol.agent_volume[k]);
                }
                CHECK(is_fixed_point(g, rec.solution));
            }
            for (AgentId i = 0; i < p.num_agents(); ++i) {
                CHECK(run.assignment.shares.row_sum(i) == p.endowments.row_sum(i));
            }
            CHECK(replay(p, run.trace) == run.assignment);
        }
    }
}

TEST_CASE("runs are deterministic") {
    for (const auto& p : random_instances(12, 30)) {
        const auto a = run_fttc(p, Policy::equal());
        const auto b = run_fttc(p, Policy::equal());
        CHECK(a.assignment == b.assignment);
        REQUIRE(a.trace.steps.size() == b.trace.steps.size());
        for (std::size_t d = 0; d < a.trace.steps.size(); ++d) {
            CHECK(a.trace.steps[d].solution.agent_volume == b.trace.steps[d].solution.agent_volume);
            CHECK(a.trace.steps[d].state.labels == b.trace.steps[d].state.labels);
        }
    }
}

TEST_CASE("labels chain through indifferences across rounds") {
    std::size_t chained = 0;
    for (const auto& p : random_instances(13, 400)) {
        const auto run = run_fttc(p, Policy::equal());
        for (const auto& rec : run.trace.steps) {
            const auto& s = rec.state;
            if (s.label_rounds.size() >= 2) ++chained;
            std::vector<bool> reached = s.remaining;
            for (const auto& round : s.label_rounds) {
                std::vector<bool> next = reached;
                for (AgentId i : round.agents) {
                    for (ObjectId o : s.labels[i]) {
                        bool linked = false;
                        for (ObjectId q = 0; q < p.num_objects(); ++q) {
                            if (reached[q] && p.preferences[i].indifferent(o, q)) linked = true;
                        }
                        CHECK(linked);
                        next[o] = true;
                    }
                }
                reached = std::move(next);
            }
            CHECK(reached == s.available);
        }
    }
    CHECK(chained > 0);
}
