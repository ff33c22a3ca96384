#include "fttc/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>

#include "fttc/errors.hpp"

namespace fttc {

bool StepState::has_label(AgentId i, ObjectId o) const {
    return i < labels.size() && std::binary_search(labels[i].begin(), labels[i].end(), o);
}

bool StepState::points_to(AgentId i, ObjectId o) const {
    return i < pointed.size() && std::binary_search(pointed[i].begin(), pointed[i].end(), o);
}

bool StepState::any_remaining() const {
    return std::any_of(remaining.begin(), remaining.end(), [](bool b) { return b; });
}

Policy Policy::custom(std::string name, ParameterGenerator generator) {
    Policy p(Kind::Custom, std::move(name));
    p.generator_ = std::move(generator);
    return p;
}

Policy Policy::weighted(std::string name, std::vector<Rational> weights) {
    for (const auto& w : weights) {
        if (!w.is_positive()) throw InvalidInput("policy weights must be positive");
    }
    return custom(std::move(name), [weights = std::move(weights)](const Problem& problem, const StepState& s) {
        if (weights.size() != problem.num_agents()) throw InvalidInput("policy weights do not match the agents");
        ParameterSet params{Matrix(s.num_agents(), s.num_objects()), Matrix(s.num_agents(), s.num_objects()),
                            uniform_division(s)};
        for (ObjectId o = 0; o < s.num_objects(); ++o) {
            if (!s.remaining[o]) continue;
            Rational total;
            for (AgentId i = 0; i < s.num_agents(); ++i) {
                if (s.endowments(i, o).is_positive()) total += weights[i];
            }
            for (AgentId i = 0; i < s.num_agents(); ++i) {
                if (!s.endowments(i, o).is_positive()) continue;
                params.ratio(i, o) = weights[i] / total;
                params.quota(i, o) = s.endowments(i, o);
            }
        }
        fill_labeled_ratio(s, params.ratio);
        return params;
    });
}

Policy policy_from_name(const std::string& name) {
    if (name == "equal") return Policy::equal();
    if (name == "proportional") return Policy::proportional();
    if (name == "leveling") return Policy::leveling();
    throw InvalidInput("unknown policy \"" + name + "\"");
}

StepState initial_state(const Problem& problem) {
    StepState s;
    s.endowments = problem.endowments;
    s.assignment = Matrix(problem.num_agents(), problem.num_objects());
    s.remaining.assign(problem.num_objects(), false);
    for (ObjectId o = 0; o < problem.num_objects(); ++o) s.remaining[o] = problem.supply(o).is_positive();
    return s;
}

StepState labeling_stage(const Problem& problem, StepState s) {
    const std::size_t n = s.num_agents();
    const std::size_t m = s.num_objects();
    s.labels.assign(n, {});
    s.label_rounds.clear();
    s.available = s.remaining;

    std::vector<ObjectId> newly;
    for (ObjectId o = 0; o < m; ++o) {
        if (s.remaining[o]) newly.push_back(o);
    }
    std::vector<bool> labeler(n, false);

    while (!newly.empty()) {
        LabelRound round;
        for (AgentId i = 0; i < n; ++i) {
            if (labeler[i]) continue;
            const auto& pref = problem.preferences[i];
            std::vector<bool> hot_class(pref.num_classes(), false);
            for (ObjectId o : newly) hot_class[pref.rank(o)] = true;
            std::vector<ObjectId> mine;
            for (ObjectId o = 0; o < m; ++o) {
                if (!s.available[o] && s.assignment(i, o).is_positive() && hot_class[pref.rank(o)]) {
                    mine.push_back(o);
                }
            }
            if (!mine.empty()) {
                s.labels[i] = std::move(mine);
                round.agents.push_back(i);
            }
        }
        if (round.agents.empty()) break;
        for (AgentId i : round.agents) {
            labeler[i] = true;
            round.objects.insert(round.objects.end(), s.labels[i].begin(), s.labels[i].end());
        }
        std::sort(round.objects.begin(), round.objects.end());
        round.objects.erase(std::unique(round.objects.begin(), round.objects.end()), round.objects.end());
        for (ObjectId o : round.objects) s.available[o] = true;
        newly = round.objects;
        s.label_rounds.push_back(std::move(round));
    }
    return s;
}

StepState pointing_stage(const Problem& problem, StepState s) {
    const std::size_t n = s.num_agents();
    const std::size_t m = s.num_objects();
    s.active.assign(n, false);
    s.pointed.assign(n, {});
    s.pointing_round.assign(n, 0);

    std::vector<std::size_t> layer(m, 0);  // 0 = real, k = labeled in round k
    for (std::size_t k = 0; k < s.label_rounds.size(); ++k) {
        for (ObjectId o : s.label_rounds[k].objects) layer[o] = k + 1;
    }

    for (AgentId i = 0; i < n; ++i) {
        s.active[i] = !s.labels[i].empty() || s.endowments.row_sum(i).is_positive();
        if (!s.active[i]) continue;
        const auto& pref = problem.preferences[i];
        std::optional<std::size_t> best;
        for (ObjectId o = 0; o < m; ++o) {
            if (s.available[o] && (!best || pref.rank(o) < *best)) best = pref.rank(o);
        }
        if (!best) throw EngineError("pointing: active agent has no available object");
        std::optional<std::size_t> first_layer;
        for (ObjectId o = 0; o < m; ++o) {
            if (s.available[o] && pref.rank(o) == *best && (!first_layer || layer[o] < *first_layer)) {
                first_layer = layer[o];
            }
        }
        for (ObjectId o = 0; o < m; ++o) {
            if (s.available[o] && pref.rank(o) == *best && layer[o] == *first_layer) s.pointed[i].push_back(o);
        }
        s.pointing_round[i] = *first_layer + 1;
    }
    return s;
}

void fill_labeled_ratio(const StepState& s, Matrix& ratio) {
    for (ObjectId o = 0; o < s.num_objects(); ++o) {
        if (!s.available[o] || s.remaining[o]) continue;
        std::vector<AgentId> labelers;
        for (AgentId i = 0; i < s.num_agents(); ++i) {
            if (s.has_label(i, o)) labelers.push_back(i);
        }
        const Rational share(1, static_cast<long>(labelers.size()));
        for (AgentId i : labelers) ratio(i, o) = share;
    }
}

Matrix uniform_division(const StepState& s) {
    Matrix gamma(s.num_agents(), s.num_objects());
    for (AgentId i = 0; i < s.num_agents(); ++i) {
        if (!s.active[i]) continue;
        const Rational share(1, static_cast<long>(s.pointed[i].size()));
        for (ObjectId o : s.pointed[i]) gamma(i, o) = share;
    }
    return gamma;
}

ParameterSet make_parameters(const Policy& policy, const Problem& problem, const StepState& s) {
    if (policy.kind() == Policy::Kind::Custom) return policy.generator()(problem, s);

    const std::size_t n = s.num_agents();
    ParameterSet params{Matrix(n, s.num_objects()), Matrix(n, s.num_objects()), uniform_division(s)};
    for (ObjectId o = 0; o < s.num_objects(); ++o) {
        if (!s.remaining[o]) continue;
        std::vector<AgentId> holders;
        Rational total;
        for (AgentId i = 0; i < n; ++i) {
            if (s.endowments(i, o).is_positive()) {
                holders.push_back(i);
                total += s.endowments(i, o);
            }
        }
        switch (policy.kind()) {
            case Policy::Kind::Equal: {
                const Rational share(1, static_cast<long>(holders.size()));
                for (AgentId i : holders) {
                    params.ratio(i, o) = share;
                    params.quota(i, o) = s.endowments(i, o);
                }
                break;
            }
            case Policy::Kind::Proportional:
                for (AgentId i : holders) {
                    params.ratio(i, o) = s.endowments(i, o) / total;
                    params.quota(i, o) = s.endowments(i, o);
                }
                break;
            case Policy::Kind::Leveling: {
                Rational top;
                for (AgentId i : holders) top = max(top, s.endowments(i, o));
                Rational second;  // largest holding strictly below the top, zero if none
                std::vector<AgentId> leaders;
                for (AgentId i = 0; i < n; ++i) {
                    const auto& w = s.endowments(i, o);
                    if (w == top) leaders.push_back(i);
                    else second = max(second, w);
                }
                const Rational share(1, static_cast<long>(leaders.size()));
                for (AgentId i : leaders) {
                    params.ratio(i, o) = share;
                    params.quota(i, o) = top - second;
                }
                break;
            }
            case Policy::Kind::Custom:
                break;
        }
    }
    fill_labeled_ratio(s, params.ratio);
    return params;
}

void validate_parameters(const StepState& s, const ParameterSet& p) {
    const std::size_t n = s.num_agents();
    const std::size_t m = s.num_objects();
    auto fail = [&](const std::string& what) {
        throw EngineError("invalid parameters at step " + std::to_string(s.step + 1) + ": " + what);
    };
    if (p.ratio.rows() != n || p.ratio.cols() != m || p.quota.rows() != n || p.quota.cols() != m ||
        p.division.rows() != n || p.division.cols() != m) {
        fail("dimension mismatch");
    }
    const Rational one(1);
    for (ObjectId o = 0; o < m; ++o) {
        Rational col;
        for (AgentId i = 0; i < n; ++i) {
            const auto& lam = p.ratio(i, o);
            if (lam.is_negative()) fail("negative ratio");
            if (lam.is_positive()) {
                if (!s.available[o]) fail("ratio on an unavailable object");
                if (s.remaining[o] && !s.endowments(i, o).is_positive()) fail("ratio on a zero endowment");
                if (!s.remaining[o] && !s.has_label(i, o)) fail("ratio on an unlabeled consumption");
            }
            col += lam;
            const auto& beta = p.quota(i, o);
            if (beta.is_negative() || beta > s.endowments(i, o)) fail("quota outside [0, endowment]");
            if (beta.is_positive() && !s.remaining[o]) fail("quota on a non-remaining object");
        }
        if (s.available[o] && col != one) fail("ratio column does not sum to 1");
    }
    for (AgentId i = 0; i < n; ++i) {
        Rational row;
        for (ObjectId o = 0; o < m; ++o) {
            const auto& g = p.division(i, o);
            if (g.is_negative()) fail("negative division weight");
            if (g.is_positive() && !s.points_to(i, o)) fail("division weight outside the pointed set");
            row += g;
        }
        if (s.active[i] ? row != one : !row.is_zero()) fail("division row does not sum to 1");
    }
}

TradingGraph build_trading_graph(const StepState& s, const ParameterSet& params) {
    std::vector<AgentId> agents;
    std::vector<ObjectId> objects;
    std::vector<bool> labeled;
    for (AgentId i = 0; i < s.num_agents(); ++i) {
        if (s.active[i]) agents.push_back(i);
    }
    for (ObjectId o = 0; o < s.num_objects(); ++o) {
        if (s.available[o]) {
            objects.push_back(o);
            labeled.push_back(!s.remaining[o]);
        }
    }
    Matrix demand(agents.size(), objects.size());
    Matrix supply(agents.size(), objects.size());
    Matrix holdings(agents.size(), objects.size());
    for (std::size_t k = 0; k < agents.size(); ++k) {
        const AgentId i = agents[k];
        for (std::size_t l = 0; l < objects.size(); ++l) {
            const ObjectId o = objects[l];
            demand(k, l) = params.division(i, o);
            supply(k, l) = params.ratio(i, o);
            if (!labeled[l]) holdings(k, l) = s.endowments(i, o);
            else if (s.has_label(i, o)) holdings(k, l) = s.assignment(i, o);
        }
    }
    return make_trading_graph(std::move(agents), std::move(objects), std::move(labeled), std::move(demand),
                              std::move(supply), holdings);
}

CapSet build_caps(const StepState& s, const ParameterSet& params, const TradingGraph& g) {
    CapSet caps{Matrix(g.num_agents(), g.num_objects())};
    for (std::size_t k = 0; k < g.num_agents(); ++k) {
        const AgentId i = g.agents[k];
        for (std::size_t l = 0; l < g.num_objects(); ++l) {
            const ObjectId o = g.objects[l];
            if (!g.labeled[l]) caps.caps(k, l) = params.quota(i, o);
            else if (s.has_label(i, o)) caps.caps(k, l) = s.assignment(i, o);
        }
    }
    return caps;
}

StepState trading_stage(const StepState& s, const ParameterSet& params, const TradingGraph& g,
                        const TradeSolution& sol) {
    StepState next;
    next.step = s.step + 1;
    next.endowments = s.endowments;
    next.assignment = s.assignment;
    next.remaining = s.remaining;

    for (std::size_t k = 0; k < g.num_agents(); ++k) {
        const AgentId i = g.agents[k];
        for (std::size_t l = 0; l < g.num_objects(); ++l) {
            const ObjectId o = g.objects[l];
            const Rational lost = params.ratio(i, o) * sol.object_volume[l];
            if (!lost.is_zero()) {
                if (!g.labeled[l]) next.endowments(i, o) -= lost;
                else if (s.has_label(i, o)) next.assignment(i, o) -= lost;
            }
            const Rational gained = params.division(i, o) * sol.agent_volume[k];
            if (!gained.is_zero()) next.assignment(i, o) += gained;
        }
    }
    for (AgentId i = 0; i < next.num_agents(); ++i) {
        for (ObjectId o = 0; o < next.num_objects(); ++o) {
            if (next.endowments(i, o).is_negative() || next.assignment(i, o).is_negative()) {
                throw EngineError("trading produced a negative share at step " + std::to_string(next.step));
            }
        }
    }
    for (ObjectId o = 0; o < next.num_objects(); ++o) {
        if (next.remaining[o]) next.remaining[o] = next.endowments.col_sum(o).is_positive();
    }
    return next;
}

std::size_t default_step_budget() {
    if (const char* env = std::getenv("FTTC_STEP_BUDGET")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 10000;
}

namespace {

bool some_cap_binds(const TradingGraph& g, const CapSet& caps, const TradeSolution& sol) {
    for (std::size_t k = 0; k < g.num_agents(); ++k) {
        for (std::size_t l = 0; l < g.num_objects(); ++l) {
            const auto& lam = g.supply(k, l);
            if (lam.is_positive() && sol.object_volume[l].is_positive() &&
                lam * sol.object_volume[l] == caps.caps(k, l)) {
                return true;
            }
        }
    }
    return false;
}

bool strict_subset(const std::vector<bool>& a, const std::vector<bool>& b) {
    bool smaller = false;
    for (std::size_t o = 0; o < a.size(); ++o) {
        if (a[o] && !b[o]) return false;
        if (!a[o] && b[o]) smaller = true;
    }
    return smaller;
}

}  // namespace

RunResult run_fttc(const Problem& problem, const Policy& policy, const RunOptions& options) {
    Trace trace;
    StepState state = initial_state(problem);
    bool last_made_progress = true;

    while (state.any_remaining()) {
        if (trace.steps.size() >= options.step_budget) throw StepBudgetExceeded(options.step_budget, std::move(trace));

        state = pointing_stage(problem, labeling_stage(problem, std::move(state)));
        if (!last_made_progress && !strict_subset(state.available, trace.steps.back().state.available)) {
            throw EngineError("no progress at step " + std::to_string(state.step));
        }

        ParameterSet params = make_parameters(policy, problem, state);
        validate_parameters(state, params);
        TradingGraph graph = build_trading_graph(state, params);
        const CapSet caps = build_caps(state, params, graph);
        TradeSolution solution = max_balanced_solution(graph, caps);
        StepState next = trading_stage(state, params, graph, solution);

        std::vector<ObjectId> exhausted;
        for (ObjectId o = 0; o < next.num_objects(); ++o) {
            if (state.remaining[o] && !next.remaining[o]) exhausted.push_back(o);
        }
        last_made_progress = !exhausted.empty() || some_cap_binds(graph, caps, solution);

        trace.steps.push_back(StepRecord{state, std::move(params), std::move(graph), std::move(solution),
                                         std::move(exhausted), next.endowments, next.assignment});
        state = std::move(next);
    }
    return RunResult{Assignment(state.assignment), std::move(trace)};
}

Assignment replay(const Problem& problem, const Trace& trace) {
    StepState state = initial_state(problem);
    for (const auto& rec : trace.steps) {
        StepState staged = rec.state;
        staged.endowments = state.endowments;
        staged.assignment = state.assignment;
        staged.remaining = state.remaining;
        state = trading_stage(staged, rec.params, rec.graph, rec.solution);
    }
    return Assignment(state.assignment);
}

}  // namespace fttc
