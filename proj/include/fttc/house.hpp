#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fttc/engine.hpp"
#include "fttc/model.hpp"

namespace fttc {

using AgentSet = std::vector<AgentId>;    // sorted
using ObjectSet = std::vector<ObjectId>;  // sorted

/// Agents with acceptable sets; all acceptable objects are equally good.
struct DichotomousProblem {
    std::vector<std::string> agents;
    std::vector<std::string> objects;
    std::vector<ObjectSet> acceptable;

    [[nodiscard]] std::size_t num_agents() const { return agents.size(); }
    [[nodiscard]] std::size_t num_objects() const { return objects.size(); }
    [[nodiscard]] bool accepts(AgentId i, ObjectId o) const;
};

/// Reads two-class preferences ([[acceptable], [unacceptable]]; a single
/// class means everything is acceptable). Objects nobody accepts are
/// dropped. Endowments are ignored. Throws InvalidInput for longer
/// preferences.
[[nodiscard]] DichotomousProblem dichotomous_from_problem(const Problem& problem);

/// Every object acceptable to someone, at least as many agents as objects,
/// and strict shortage on every non-empty proper object subset.
/// Throws InvalidInput naming the violated condition.
void validate_dichotomous(const DichotomousProblem& problem);

/// House-allocation Problem: the objects plus |I| - |O| objects nobody
/// accepts, every agent owning 1/|I| of each.
[[nodiscard]] Problem to_house_problem(const DichotomousProblem& problem);

/// (union of C_i over Y) intersected with `among`.
[[nodiscard]] ObjectSet gamma_set(const DichotomousProblem& problem, const AgentSet& agents, const ObjectSet& among);

struct Bottleneck {
    AgentSet agents;    // X*_k
    ObjectSet objects;  // Gamma(X*_k, P*_{k-1})
    Rational welfare;   // |objects| / |agents|
    friend bool operator==(const Bottleneck&, const Bottleneck&) = default;
};

using BottleneckSequence = std::vector<Bottleneck>;

struct EgalitarianSolution {
    BottleneckSequence bottlenecks;
    std::vector<Rational> welfare;  // per agent
};

/// Exhaustive argmin over subsets of the remaining agents at each stage,
/// keeping the union of all minimizers. Validates the problem first.
[[nodiscard]] EgalitarianSolution egalitarian_solution(const DichotomousProblem& problem);
/// Single-threaded reference for egalitarian_solution.
[[nodiscard]] EgalitarianSolution egalitarian_solution_serial(const DichotomousProblem& problem);

/// An assignment realizing the bottleneck welfare: each agent of X*_k gets
/// t_k of acceptable objects from Gamma_k. Objects are the dichotomous ones.
[[nodiscard]] Assignment egalitarian_assignment(const DichotomousProblem& problem, const BottleneckSequence& seq);

/// Per agent, the total share of its first class (of every object when the
/// preference has a single class). For two-class preferences this is the
/// dichotomous welfare.
[[nodiscard]] std::vector<Rational> welfare(const Problem& problem, const Assignment& p);

/// Objects acceptable to at least one agent of a two-class problem.
[[nodiscard]] std::vector<bool> real_objects(const Problem& problem);

/// Availability shrink events of a trace restricted to `real` objects:
/// for each step whose shrink removes some real object, the removed real
/// objects and the agents holding a positive share of them after that step.
struct ShrinkEvent {
    std::size_t step;  // 1-based
    AgentSet agents;
    ObjectSet objects;
};
[[nodiscard]] std::vector<ShrinkEvent> shrink_events(const Trace& trace, const std::vector<bool>& real);

struct EatingInterval {
    Rational start;
    Rational end;
    std::vector<Rational> rates;                 // s_i, per agent
    std::vector<std::vector<ObjectId>> pointed;  // A_i during the interval
    std::vector<std::vector<ObjectId>> labels;   // labeled consumptions during the interval
};

struct EatingSchedule {
    std::vector<EatingInterval> intervals;
    Assignment assignment;
};

/// Simultaneous eating on a house-allocation problem: agents eat favourite
/// available objects at base rate one, raised by the rate at which others
/// eat their labeled consumptions. Rates are piecewise constant between
/// exhaustion events. Requires the equal, proportional or leveling policy.
[[nodiscard]] EatingSchedule run_eating(const Problem& problem, const Policy& policy);

/// Expected assignment of random priority over all orderings, starting from
/// every maximum-cardinality matching and averaging uniformly over the
/// matchings that survive the refinement. Throws EnumerationBudgetExceeded
/// beyond `max_agents`.
[[nodiscard]] Assignment run_rp(const DichotomousProblem& problem, std::size_t max_agents = 8);
/// Single-threaded reference for run_rp.
[[nodiscard]] Assignment run_rp_serial(const DichotomousProblem& problem, std::size_t max_agents = 8);

/// All maximum-cardinality matchings; entry i is the object of agent i or
/// num_objects() when unmatched.
[[nodiscard]] std::vector<std::vector<std::size_t>> maximum_matchings(const DichotomousProblem& problem);

}  // namespace fttc
