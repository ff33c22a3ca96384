#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fttc/model.hpp"
#include "fttc/solver.hpp"

namespace fttc {

struct LabelRound {
    std::vector<AgentId> agents;    // L_k
    std::vector<ObjectId> objects;  // union of their labeled objects
};

/// Mechanism state at the start of a step, filled in stage by stage.
struct StepState {
    std::size_t step = 0;  // completed steps so far (d - 1)
    Matrix endowments;     // remaining endowments
    Matrix assignment;     // accumulated consumption
    std::vector<bool> remaining;

    // Labeling stage.
    std::vector<std::vector<ObjectId>> labels;  // per agent, sorted
    std::vector<LabelRound> label_rounds;
    std::vector<bool> available;  // remaining objects plus labeled consumptions

    // Pointing stage.
    std::vector<bool> active;
    std::vector<std::vector<ObjectId>> pointed;  // per agent, sorted
    std::vector<std::size_t> pointing_round;     // 1-based, 0 when inactive

    [[nodiscard]] std::size_t num_agents() const { return endowments.rows(); }
    [[nodiscard]] std::size_t num_objects() const { return endowments.cols(); }
    [[nodiscard]] bool has_label(AgentId i, ObjectId o) const;
    [[nodiscard]] bool points_to(AgentId i, ObjectId o) const;
    [[nodiscard]] bool any_remaining() const;
};

/// lambda (ratio), beta (quota) and gamma (division), all agents x objects.
/// Entries outside the step's active agents / available objects are zero.
struct ParameterSet {
    Matrix ratio;
    Matrix quota;
    Matrix division;
};

using ParameterGenerator = std::function<ParameterSet(const Problem&, const StepState&)>;

/// Rule for choosing a step's parameters.
class Policy {
public:
    enum class Kind { Equal, Proportional, Leveling, Custom };

    static Policy equal() { return Policy(Kind::Equal, "equal"); }
    static Policy proportional() { return Policy(Kind::Proportional, "proportional"); }
    /// Only the largest holders of an object trade it, and only down to the
    /// next holding level.
    static Policy leveling() { return Policy(Kind::Leveling, "leveling"); }
    static Policy custom(std::string name, ParameterGenerator generator);
    /// Custom policy splitting each real object among its holders in
    /// proportion to fixed positive agent weights.
    static Policy weighted(std::string name, std::vector<Rational> weights);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const ParameterGenerator& generator() const { return generator_; }

private:
    Policy(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    Kind kind_;
    std::string name_;
    ParameterGenerator generator_;
};

/// Parses "equal", "proportional" or "leveling".
[[nodiscard]] Policy policy_from_name(const std::string& name);

[[nodiscard]] StepState initial_state(const Problem& problem);

/// Labels consumptions of exhausted objects that are indifferent to an object
/// made available in the previous round, round by round.
[[nodiscard]] StepState labeling_stage(const Problem& problem, StepState state);

/// Determines active agents and their pointed sets, layer by layer.
[[nodiscard]] StepState pointing_stage(const Problem& problem, StepState state);

[[nodiscard]] ParameterSet make_parameters(const Policy& policy, const Problem& problem, const StepState& state);

/// Ratio on labeled objects: uniform over that object's labelers.
void fill_labeled_ratio(const StepState& state, Matrix& ratio);
/// Division: uniform over each active agent's pointed set.
[[nodiscard]] Matrix uniform_division(const StepState& state);

/// Throws EngineError on any violated parameter invariant.
void validate_parameters(const StepState& state, const ParameterSet& params);

[[nodiscard]] TradingGraph build_trading_graph(const StepState& state, const ParameterSet& params);
/// Quota on real objects, current labeled consumption on labeled ones.
[[nodiscard]] CapSet build_caps(const StepState& state, const ParameterSet& params, const TradingGraph& graph);

/// Applies one step's trades; returns the next step's initial state.
/// Throws EngineError if any share would become negative.
[[nodiscard]] StepState trading_stage(const StepState& state, const ParameterSet& params,
                                      const TradingGraph& graph, const TradeSolution& solution);

struct StepRecord {
    StepState state;  // after labeling and pointing
    ParameterSet params;
    TradingGraph graph;
    TradeSolution solution;
    std::vector<ObjectId> exhausted;
    Matrix endowments_after;
    Matrix assignment_after;
};

struct Trace {
    std::vector<StepRecord> steps;
};

struct RunResult {
    Assignment assignment;
    Trace trace;
};

struct RunOptions {
    std::size_t step_budget = 10000;
};

/// Reads FTTC_STEP_BUDGET, falling back to 10000.
[[nodiscard]] std::size_t default_step_budget();

class StepBudgetExceeded : public std::runtime_error {
public:
    StepBudgetExceeded(std::size_t budget, Trace trace)
        : std::runtime_error("step budget of " + std::to_string(budget) + " exhausted"),
          trace_(std::move(trace)) {}
    [[nodiscard]] const Trace& trace() const { return trace_; }

private:
    Trace trace_;
};

/// Runs labeling, pointing and trading until every object is exhausted.
[[nodiscard]] RunResult run_fttc(const Problem& problem, const Policy& policy, const RunOptions& options = {});

/// Re-applies the recorded trades from the problem's initial state.
[[nodiscard]] Assignment replay(const Problem& problem, const Trace& trace);

}  // namespace fttc
