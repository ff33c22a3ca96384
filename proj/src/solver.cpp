#include "fttc/solver.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "fttc/errors.hpp"
#include "fttc/linalg.hpp"
#include "fttc/lp.hpp"

namespace fttc {

namespace {

// Positive-weight out-neighbours of every node.
std::vector<std::vector<std::size_t>> adjacency(const TradingGraph& g) {
    std::vector<std::vector<std::size_t>> out(g.num_nodes());
    for (std::size_t k = 0; k < g.num_agents(); ++k) {
        for (std::size_t l = 0; l < g.num_objects(); ++l) {
            if (g.demand(k, l).is_positive()) out[k].push_back(g.object_node(l));
            if (g.supply(k, l).is_positive()) out[g.object_node(l)].push_back(k);
        }
    }
    return out;
}

// Tarjan; returns component id per node.
std::vector<std::size_t> strong_components(const std::vector<std::vector<std::size_t>>& adj,
                                           std::size_t& count) {
    const std::size_t n = adj.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<std::size_t> stack;
    std::vector<bool> on_stack(n, false);
    std::size_t next = 0;
    count = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = next++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : adj[v]) {
            if (index[w] == unvisited) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w] = count;
            } while (w != v);
            ++count;
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (index[v] == unvisited) visit(v);
    }
    return comp;
}

// Transition weight from node u to node v.
Rational transition(const TradingGraph& g, std::size_t u, std::size_t v) {
    const std::size_t a = g.num_agents();
    if (u < a && v >= a) return g.demand(u, v - a);
    if (u >= a && v < a) return g.supply(v, u - a);
    return Rational();
}

TradeSolution empty_solution(const TradingGraph& g) {
    TradeSolution s;
    s.agent_volume.assign(g.num_agents(), Rational());
    s.object_volume.assign(g.num_objects(), Rational());
    return s;
}

void split_losses(const TradingGraph& g, TradeSolution& s) {
    s.consumption_loss.assign(g.num_agents(), Rational());
    s.net_consumption.assign(g.num_agents(), Rational());
    for (std::size_t k = 0; k < g.num_agents(); ++k) {
        for (std::size_t l = 0; l < g.num_objects(); ++l) {
            const auto& lam = g.supply(k, l);
            if (lam.is_zero() || s.object_volume[l].is_zero()) continue;
            (g.labeled[l] ? s.consumption_loss[k] : s.net_consumption[k]) += lam * s.object_volume[l];
        }
    }
}

}  // namespace

Matrix TradingGraph::coefficient_matrix() const {
    Matrix m(num_nodes(), num_nodes());
    for (std::size_t k = 0; k < num_agents(); ++k) {
        for (std::size_t l = 0; l < num_objects(); ++l) {
            m(object_node(l), k) = demand(k, l);
            m(k, object_node(l)) = supply(k, l);
        }
    }
    return m;
}

bool TradeSolution::is_zero() const {
    return std::all_of(agent_volume.begin(), agent_volume.end(), [](const Rational& r) { return r.is_zero(); }) &&
           std::all_of(object_volume.begin(), object_volume.end(), [](const Rational& r) { return r.is_zero(); });
}

TradingGraph make_trading_graph(std::vector<AgentId> agents, std::vector<ObjectId> objects,
                                std::vector<bool> labeled, Matrix demand, Matrix supply, const Matrix& holdings) {
    const std::size_t a = agents.size();
    const std::size_t b = objects.size();
    if (labeled.size() != b || demand.rows() != a || demand.cols() != b || supply.rows() != a ||
        supply.cols() != b || holdings.rows() != a || holdings.cols() != b) {
        throw EngineError("trading graph: dimension mismatch");
    }
    const Rational one(1);
    for (std::size_t k = 0; k < a; ++k) {
        Rational s;
        for (std::size_t l = 0; l < b; ++l) {
            if (demand(k, l).is_negative()) throw EngineError("trading graph: negative demand weight");
            s += demand(k, l);
        }
        if (s != one) throw EngineError("trading graph: demand weights of an agent do not sum to 1");
    }
    for (std::size_t l = 0; l < b; ++l) {
        Rational s;
        for (std::size_t k = 0; k < a; ++k) {
            if (supply(k, l).is_negative()) throw EngineError("trading graph: negative supply weight");
            if (supply(k, l).is_positive() && !holdings(k, l).is_positive()) {
                throw EngineError("trading graph: positive supply weight on a zero holding");
            }
            s += supply(k, l);
        }
        if (s != one) throw EngineError("trading graph: supply weights of an object do not sum to 1");
    }
    return TradingGraph{std::move(agents), std::move(objects), std::move(labeled), std::move(demand),
                        std::move(supply)};
}

std::vector<std::vector<std::size_t>> closed_classes(const TradingGraph& graph) {
    const auto adj = adjacency(graph);
    std::size_t count = 0;
    const auto comp = strong_components(adj, count);
    std::vector<bool> closed(count, true);
    for (std::size_t v = 0; v < adj.size(); ++v) {
        for (std::size_t w : adj[v]) {
            if (comp[w] != comp[v]) closed[comp[v]] = false;
        }
    }
    std::vector<std::vector<std::size_t>> classes(count);
    for (std::size_t v = 0; v < adj.size(); ++v) classes[comp[v]].push_back(v);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t c = 0; c < count; ++c) {
        if (closed[c]) out.push_back(std::move(classes[c]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

TradeSolution max_balanced_solution(const TradingGraph& graph, const CapSet& caps) {
    TradeSolution sol = empty_solution(graph);
    const std::size_t a = graph.num_agents();

    for (auto& nodes : closed_classes(graph)) {
        // pi_v = sum_u P(u -> v) pi_u on the class, with pi of the first node pinned to 1.
        const std::size_t n = nodes.size();
        Matrix sys(n, n);
        std::vector<Rational> rhs(n);
        sys(0, 0) = Rational(1);
        rhs[0] = Rational(1);
        for (std::size_t r = 1; r < n; ++r) {
            sys(r, r) = Rational(-1);
            for (std::size_t c = 0; c < n; ++c) {
                const Rational w = transition(graph, nodes[c], nodes[r]);
                if (!w.is_zero()) sys(r, c) += w;
            }
        }
        auto weights = solve_square(std::move(sys), std::move(rhs));
        if (!weights) throw EngineError("solver: singular stationary system on a closed class");

        std::optional<Rational> scale;
        for (std::size_t idx = 0; idx < n; ++idx) {
            if (nodes[idx] < a) continue;
            const std::size_t l = nodes[idx] - a;
            for (std::size_t k = 0; k < a; ++k) {
                const auto& lam = graph.supply(k, l);
                if (lam.is_zero()) continue;
                const auto& cap = caps.caps(k, l);
                if (cap.is_negative()) throw EngineError("solver: negative cap");
                Rational bound = cap / (lam * (*weights)[idx]);
                if (!scale || bound < *scale) scale = std::move(bound);
            }
        }
        if (!scale) throw EngineError("solver: closed class without any capped supply edge");

        for (std::size_t idx = 0; idx < n; ++idx) {
            const Rational v = *scale * (*weights)[idx];
            if (nodes[idx] < a) sol.agent_volume[nodes[idx]] = v;
            else sol.object_volume[nodes[idx] - a] = v;
        }
        sol.classes.push_back(ClosedClass{std::move(nodes), std::move(*weights), *scale});
    }
    split_losses(graph, sol);
    return sol;
}

TradeSolution oracle_solution(const TradingGraph& graph, const CapSet& caps) {
    const std::size_t n = graph.num_nodes();
    const Matrix m = graph.coefficient_matrix();
    lp::LinearProgram prog(n);
    for (std::size_t v = 0; v < n; ++v) prog.objective[v] = Rational(1);
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::pair<std::size_t, Rational>> terms;
        for (std::size_t u = 0; u < n; ++u) {
            Rational coef = (u == v ? Rational(1) : Rational()) - m(v, u);
            if (!coef.is_zero()) terms.emplace_back(u, std::move(coef));
        }
        prog.add(std::move(terms), lp::Sense::Equal, Rational());
    }
    for (std::size_t k = 0; k < graph.num_agents(); ++k) {
        for (std::size_t l = 0; l < graph.num_objects(); ++l) {
            const auto& lam = graph.supply(k, l);
            if (lam.is_zero()) continue;
            prog.add({{graph.object_node(l), lam}}, lp::Sense::LessEqual, caps.caps(k, l));
        }
    }
    const auto res = lp::solve(prog);
    if (res.status == lp::Status::Unbounded) throw EngineError("oracle: unbounded trading program");
    if (res.status == lp::Status::Infeasible) throw EngineError("oracle: infeasible trading program");

    TradeSolution sol = empty_solution(graph);
    for (std::size_t k = 0; k < graph.num_agents(); ++k) sol.agent_volume[k] = res.x[k];
    for (std::size_t l = 0; l < graph.num_objects(); ++l) sol.object_volume[l] = res.x[graph.object_node(l)];
    split_losses(graph, sol);
    return sol;
}

bool is_fixed_point(const TradingGraph& graph, const TradeSolution& solution) {
    const Matrix m = graph.coefficient_matrix();
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
        Rational s;
        for (std::size_t u = 0; u < graph.num_nodes(); ++u) {
            if (!m(v, u).is_zero()) s += m(v, u) * solution.node_volume(graph, u);
        }
        if (s != solution.node_volume(graph, v)) return false;
    }
    return true;
}

bool respects_caps(const TradingGraph& graph, const CapSet& caps, const TradeSolution& solution) {
    for (std::size_t k = 0; k < graph.num_agents(); ++k) {
        for (std::size_t l = 0; l < graph.num_objects(); ++l) {
            const auto& lam = graph.supply(k, l);
            if (!lam.is_zero() && lam * solution.object_volume[l] > caps.caps(k, l)) return false;
        }
    }
    return std::all_of(solution.agent_volume.begin(), solution.agent_volume.end(),
                       [](const Rational& r) { return !r.is_negative(); }) &&
           std::all_of(solution.object_volume.begin(), solution.object_volume.end(),
                       [](const Rational& r) { return !r.is_negative(); });
}

}  // namespace fttc
