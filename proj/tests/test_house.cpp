#include <doctest.h>

#include <random>

#include "fttc/errors.hpp"
#include "fttc/house.hpp"
#include "support.hpp"

using namespace fttc;
using test::R;

namespace {

DichotomousProblem make_dich(std::size_t m, std::vector<ObjectSet> acc) {
    DichotomousProblem d;
    d.agents = test::names("i", acc.size());
    d.objects = test::names("o", m);
    d.acceptable = std::move(acc);
    return d;
}

}  // namespace

TEST_CASE("example 2 dichotomous view drops the null objects") {
    const auto d = dichotomous_from_problem(test::load("example2.json"));
    CHECK(d.objects == std::vector<std::string>{"o1", "o2", "o3"});
    CHECK(d.acceptable[2] == ObjectSet{0, 1});
    CHECK_NOTHROW(validate_dichotomous(d));
    CHECK(gamma_set(d, {0, 1}, {0, 1, 2}) == ObjectSet{0});
    CHECK(gamma_set(d, {}, {0, 1, 2}).empty());
    CHECK(gamma_set(d, {0, 1, 2, 3, 4}, {0, 1, 2}) == ObjectSet{0, 1, 2});
}

TEST_CASE("example 2 egalitarian solution") {
    const auto d = dichotomous_from_problem(test::load("example2.json"));
    const auto sol = egalitarian_solution(d);
    REQUIRE(sol.bottlenecks.size() == 2);
    CHECK(sol.bottlenecks[0].agents == AgentSet{0, 1});
    CHECK(sol.bottlenecks[0].welfare == R("1/2"));
    CHECK(sol.bottlenecks[1].agents == AgentSet{2, 3, 4});
    CHECK(sol.bottlenecks[1].welfare == R("2/3"));
    CHECK(sol.welfare == std::vector<Rational>{R("1/2"), R("1/2"), R("2/3"), R("2/3"), R("2/3")});
    CHECK(egalitarian_solution_serial(d).welfare == sol.welfare);

    const auto p = egalitarian_assignment(d, sol.bottlenecks);
    Assignment expected(5, 3);
    expected(0, 0) = R("1/2");
    expected(1, 0) = R("1/2");
    expected(2, 1) = R("2/3");
    expected(3, 1) = R("1/3");
    expected(3, 2) = R("1/3");
    expected(4, 2) = R("2/3");
    CHECK(p == expected);
}

TEST_CASE("example 2 random priority") {
    const auto d = dichotomous_from_problem(test::load("example2.json"));
    Assignment expected(5, 3);
    expected(0, 0) = R("9/20");
    expected(1, 0) = R("9/20");
    expected(2, 0) = R("1/10");
    expected(2, 1) = R("3/5");
    expected(3, 1) = R("2/5");
    expected(3, 2) = R("3/10");
    expected(4, 2) = R("7/10");
    CHECK(run_rp(d) == expected);
    CHECK(run_rp_serial(d) == expected);
}

TEST_CASE("small random priority cases") {
    Assignment one(1, 1);
    one(0, 0) = R("1");
    CHECK(run_rp(make_dich(1, {{0}})) == one);
    Assignment half(2, 1);
    half(0, 0) = R("1/2");
    half(1, 0) = R("1/2");
    CHECK(run_rp(make_dich(1, {{0}, {0}})) == half);
    CHECK_THROWS_AS((void)run_rp(make_dich(1, std::vector<ObjectSet>(9, ObjectSet{0}))), EnumerationBudgetExceeded);
}

TEST_CASE("two agents sharing one object form one bottleneck") {
    const auto sol = egalitarian_solution(make_dich(1, {{0}, {0}}));
    REQUIRE(sol.bottlenecks.size() == 1);
    CHECK(sol.bottlenecks[0].agents == AgentSet{0, 1});
    CHECK(sol.bottlenecks[0].welfare == R("1/2"));
}

TEST_CASE("shortage validation") {
    CHECK_THROWS_AS(validate_dichotomous(make_dich(2, {{0}, {1}})), InvalidInput);
    CHECK_THROWS_AS(validate_dichotomous(make_dich(2, {{0}, {0}, {0}})), InvalidInput);
    CHECK_NOTHROW(validate_dichotomous(make_dich(2, {{0, 1}, {0, 1}, {0, 1}})));
}

TEST_CASE("padding produces a house allocation") {
    const auto d = make_dich(2, {{0, 1}, {0}, {1}});
    const Problem p = to_house_problem(d);
    CHECK(is_house_allocation(p));
    CHECK(p.objects.size() == 3);
    CHECK(validate_problem(p).ok());
}

TEST_CASE("eating on example 1 matches the mechanism") {
    const Problem p = test::load("example1.json");
    const auto sched = run_eating(p, Policy::equal());
    CHECK(sched.assignment == test::assignment(p, {{"1", {{"b", "3/4"}, {"c", "1/4"}}},
                                                   {"2", {{"a", "1/2"}, {"b", "1/4"}, {"c", "1/4"}}},
                                                   {"3", {{"a", "1/2"}, {"c", "1/2"}}}}));
    CHECK(sched.intervals.front().rates == std::vector<Rational>(3, R("1")));
    CHECK(sched.intervals.back().end == R("1"));
    CHECK_THROWS_AS((void)run_eating(p, Policy::weighted("w", {R("1"), R("1"), R("1")})), InvalidInput);
}
