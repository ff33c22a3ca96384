#pragma once

#include <cstddef>
#include <vector>

#include "fttc/matrix.hpp"
#include "fttc/model.hpp"

namespace fttc {

/// Bipartite trading network of one step.
///
/// Nodes 0..A-1 are the active agents, nodes A..A+B-1 the available objects.
/// Agent k sends `demand(k, l)` of its volume to object l; object l sends
/// `supply(k, l)` of its volume back to agent k. Both outgoing weight
/// families sum to one, so the coefficient matrix is column-stochastic.
struct TradingGraph {
    std::vector<AgentId> agents;
    std::vector<ObjectId> objects;
    std::vector<bool> labeled;  // per object node: labeled consumption vs real endowment
    Matrix demand;              // gamma, agents x objects (local indices)
    Matrix supply;              // lambda, agents x objects (local indices)

    [[nodiscard]] std::size_t num_agents() const { return agents.size(); }
    [[nodiscard]] std::size_t num_objects() const { return objects.size(); }
    [[nodiscard]] std::size_t num_nodes() const { return agents.size() + objects.size(); }
    [[nodiscard]] std::size_t object_node(std::size_t l) const { return agents.size() + l; }

    /// Full coefficient matrix M with x = M x, indexed by node.
    [[nodiscard]] Matrix coefficient_matrix() const;
};

/// Per (agent, object) upper bound on lambda * x_o, local indices.
/// Entries where lambda is zero are ignored.
struct CapSet {
    Matrix caps;
};

struct ClosedClass {
    std::vector<std::size_t> nodes;
    std::vector<Rational> weights;  // stationary weights of `nodes`, first node normalized to 1
    Rational scale;
};

struct TradeSolution {
    std::vector<Rational> agent_volume;      // x_i
    std::vector<Rational> object_volume;     // x_o
    std::vector<Rational> consumption_loss;  // x^c_i, lost from labeled consumptions
    std::vector<Rational> net_consumption;   // x^n_i, lost from real endowments
    std::vector<ClosedClass> classes;        // empty for oracle solutions

    [[nodiscard]] Rational node_volume(const TradingGraph& g, std::size_t node) const {
        return node < g.num_agents() ? agent_volume[node] : object_volume[node - g.num_agents()];
    }
    [[nodiscard]] bool is_zero() const;
};

/// Assembles and validates a trading graph. `holdings(k, l)` is the agent's
/// remaining endowment (real objects) or labeled consumption (labeled objects).
///
/// Throws EngineError when a demand row or a supply column does not sum to
/// one, or when positive supply weight sits on a zero holding.
[[nodiscard]] TradingGraph make_trading_graph(std::vector<AgentId> agents, std::vector<ObjectId> objects,
                                              std::vector<bool> labeled, Matrix demand, Matrix supply,
                                              const Matrix& holdings);

/// Componentwise-maximum nonnegative solution of x = M x under the caps.
///
/// Stationary measures of the chain live on its closed classes and are unique
/// per class up to scale, so each closed class is scaled independently to the
/// largest factor its caps allow. Nodes outside closed classes get zero.
[[nodiscard]] TradeSolution max_balanced_solution(const TradingGraph& graph, const CapSet& caps);

/// Same problem solved as an exact LP: maximize sum(x) subject to x = M x,
/// lambda * x_o <= cap, x >= 0. Throws EngineError if unbounded.
[[nodiscard]] TradeSolution oracle_solution(const TradingGraph& graph, const CapSet& caps);

/// M x - x == 0 exactly.
[[nodiscard]] bool is_fixed_point(const TradingGraph& graph, const TradeSolution& solution);

/// Every lambda * x_o <= cap.
[[nodiscard]] bool respects_caps(const TradingGraph& graph, const CapSet& caps, const TradeSolution& solution);

/// Strongly connected components with no outgoing edge, nodes sorted.
[[nodiscard]] std::vector<std::vector<std::size_t>> closed_classes(const TradingGraph& graph);

}  // namespace fttc
