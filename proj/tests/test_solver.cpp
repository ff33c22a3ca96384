#include <doctest.h>

#include <random>

#include "fttc/engine.hpp"
#include "fttc/errors.hpp"
#include "fttc/lp.hpp"
#include "fttc/solver.hpp"
#include "support.hpp"

using namespace fttc;
using test::R;

TEST_CASE("simplex on a small program") {
    // max x + y, x + 2y <= 4, 3x + y <= 6
    lp::LinearProgram prog(2);
    prog.objective = {R("1"), R("1")};
    prog.add({{0, R("1")}, {1, R("2")}}, lp::Sense::LessEqual, R("4"));
    prog.add({{0, R("3")}, {1, R("1")}}, lp::Sense::LessEqual, R("6"));
    const auto res = lp::solve(prog);
    REQUIRE(res.status == lp::Status::Optimal);
    CHECK(res.value == R("14/5"));
    CHECK(res.x == std::vector<Rational>{R("8/5"), R("6/5")});

    lp::LinearProgram inf(1);
    inf.add({{0, R("1")}}, lp::Sense::GreaterEqual, R("2"));
    inf.add({{0, R("1")}}, lp::Sense::LessEqual, R("1"));
    CHECK(lp::solve(inf).status == lp::Status::Infeasible);

    lp::LinearProgram unb(1);
    unb.objective = {R("1")};
    CHECK(lp::solve(unb).status == lp::Status::Unbounded);
}

TEST_CASE("intro step 2 graph") {
    // agents i, j; objects b (real), a (labeled by i)
    Matrix demand(2, 2), supply(2, 2), holdings(2, 2);
    demand(0, 0) = R("1");  // i -> b
    demand(1, 1) = R("1");  // j -> a
    supply(0, 0) = R("1/2");
    supply(1, 0) = R("1/2");
    supply(0, 1) = R("1");
    holdings(0, 0) = R("1/2");
    holdings(1, 0) = R("1/2");
    holdings(0, 1) = R("1/2");
    const auto g = make_trading_graph({0, 1}, {1, 0}, {false, true}, demand, supply, holdings);
    CapSet caps{holdings};
    const auto sol = max_balanced_solution(g, caps);
    CHECK(sol.object_volume == std::vector<Rational>{R("1"), R("1/2")});
    CHECK(sol.agent_volume == std::vector<Rational>{R("1"), R("1/2")});
    CHECK(sol.consumption_loss == std::vector<Rational>{R("1/2"), R("0")});
    CHECK(sol.net_consumption == std::vector<Rational>{R("1/2"), R("1/2")});
    CHECK(oracle_solution(g, caps).agent_volume == sol.agent_volume);
    CHECK(is_fixed_point(g, sol));

    CapSet zero{Matrix(2, 2)};
    CHECK(max_balanced_solution(g, zero).is_zero());
}

TEST_CASE("example 1 step 2 graph from the engine") {
    const Problem p = test::load("example1.json");
    const auto run = run_fttc(p, Policy::equal());
    const auto& rec = run.trace.steps[1];
    const auto& g = rec.graph;
    // nodes 1,2,3 then a (labeled), b, c; nobody demands c
    CHECK(g.objects == std::vector<ObjectId>{0, 1, 2});
    CHECK(g.labeled == std::vector<bool>{true, false, false});
    CHECK(g.demand(0, 1) == R("1"));
    CHECK(g.demand(1, 0) == R("1"));
    CHECK(g.demand(2, 0) == R("1"));
    CHECK(g.supply(0, 0) == R("1"));
    for (std::size_t k = 0; k < 3; ++k) CHECK(g.supply(k, 1) == R("1/3"));
    const auto caps = build_caps(rec.state, rec.params, g);
    CHECK(caps.caps(0, 1) == R("4/15"));
    CHECK(caps.caps(0, 0) == R("1/5"));
    CHECK(rec.solution.object_volume == std::vector<Rational>{R("1/5"), R("3/10"), R("0")});
    CHECK(oracle_solution(g, caps).object_volume == rec.solution.object_volume);

    // column sums of the coefficient matrix
    const Matrix m = g.coefficient_matrix();
    for (std::size_t c = 0; c < m.cols(); ++c) CHECK(m.col_sum(c) == R("1"));
}

TEST_CASE("self trade") {
    Matrix one(1, 1);
    one(0, 0) = R("1");
    const auto g = make_trading_graph({0}, {0}, {false}, one, one, one);
    const auto sol = max_balanced_solution(g, CapSet{one});
    CHECK(sol.agent_volume[0] == R("1"));
    CHECK(sol.object_volume[0] == R("1"));
}

TEST_CASE("graph validation") {
    Matrix half(1, 1), one(1, 1), zero(1, 1);
    half(0, 0) = R("1/2");
    one(0, 0) = R("1");
    CHECK_THROWS_AS((void)make_trading_graph({0}, {0}, {false}, half, one, one), EngineError);
    CHECK_THROWS_AS((void)make_trading_graph({0}, {0}, {false}, one, half, one), EngineError);
    CHECK_THROWS_AS((void)make_trading_graph({0}, {0}, {false}, one, one, zero), EngineError);
}
