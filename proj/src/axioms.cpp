#include "fttc/axioms.hpp"

#include <algorithm>
#include <functional>

#include "fttc/errors.hpp"
#include "fttc/lp.hpp"

namespace fttc {

const char* to_string(Axiom a) {
    switch (a) {
        case Axiom::IR: return "ir";
        case Axiom::SdEfficiency: return "sd-efficiency";
        case Axiom::ETE: return "ete";
        case Axiom::EENE: return "eene";
        case Axiom::EF: return "ef";
        case Axiom::BE: return "be";
        case Axiom::StepwiseETE: return "stepwise-ete";
        case Axiom::StepwiseEEET: return "stepwise-eeet";
        case Axiom::BoundedAdvantage: return "bounded-advantage";
    }
    return "?";
}

std::optional<Axiom> axiom_from_name(std::string_view name) {
    for (Axiom a : {Axiom::IR, Axiom::SdEfficiency, Axiom::ETE, Axiom::EENE, Axiom::EF, Axiom::BE,
                    Axiom::StepwiseETE, Axiom::StepwiseEEET, Axiom::BoundedAdvantage}) {
        if (name == to_string(a)) return a;
    }
    return std::nullopt;
}

namespace {

bool same_row(const Matrix& m, AgentId i, AgentId j) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m(i, c) != m(j, c)) return false;
    }
    return true;
}

bool envies(const Problem& problem, const Assignment& p, AgentId i, AgentId j) {
    return sd_compare(p.lottery(i), p.lottery(j), problem.preferences[i]) == DominanceVerdict::Incomparable;
}

AxiomReport pair_failure(Axiom a, AgentId i, AgentId j, std::string detail) {
    return AxiomReport{a, false, PairWitness{i, j}, std::move(detail)};
}

// First ordered pair (i, j), i != j, accepted by `relevant` and rejected by `ok`.
AxiomReport over_pairs(Axiom a, const Problem& problem, const std::function<bool(AgentId, AgentId)>& relevant,
                       const std::function<bool(AgentId, AgentId)>& ok, const char* what) {
    for (AgentId i = 0; i < problem.num_agents(); ++i) {
        for (AgentId j = 0; j < problem.num_agents(); ++j) {
            if (i == j || !relevant(i, j) || ok(i, j)) continue;
            return pair_failure(a, i, j, problem.agents[i] + " " + what + " " + problem.agents[j]);
        }
    }
    return AxiomReport{a, true, {}, ""};
}

}  // namespace

AxiomReport check_ir(const Problem& problem, const Assignment& p) {
    for (AgentId i = 0; i < problem.num_agents(); ++i) {
        const auto v = sd_compare(p.lottery(i), problem.endowment(i), problem.preferences[i]);
        if (!weakly_dominates(v)) {
            return {Axiom::IR, false, AgentWitness{i}, problem.agents[i] + " prefers the endowment"};
        }
        if (p.shares.row_sum(i) != problem.endowments.row_sum(i)) {
            return {Axiom::IR, false, AgentWitness{i}, problem.agents[i] + " total differs from the endowment"};
        }
    }
    return {Axiom::IR, true, {}, ""};
}

bool sd_dominates(const Problem& problem, const Assignment& dominating, const Assignment& p) {
    bool strict = false;
    for (AgentId i = 0; i < problem.num_agents(); ++i) {
        const auto v = sd_compare(dominating.lottery(i), p.lottery(i), problem.preferences[i]);
        if (!weakly_dominates(v)) return false;
        strict = strict || v == DominanceVerdict::Strict;
    }
    return strict;
}

AxiomReport check_sd_efficiency(const Problem& problem, const Assignment& p) {
    const std::size_t n = problem.num_agents();
    const std::size_t m = problem.num_objects();
    auto var = [m](AgentId i, ObjectId o) { return i * m + o; };

    std::size_t slacks = 0;
    for (const auto& pref : problem.preferences) slacks += pref.num_classes();
    lp::LinearProgram prog(n * m + slacks);

    std::size_t s = n * m;
    for (AgentId i = 0; i < n; ++i) {
        const auto& pref = problem.preferences[i];
        const auto target = cumulative_profile(p.shares.row(i), pref);
        std::vector<std::pair<std::size_t, Rational>> prefix;
        for (std::size_t c = 0; c < pref.num_classes(); ++c, ++s) {
            for (ObjectId o : pref.classes()[c]) prefix.emplace_back(var(i, o), Rational(1));
            auto terms = prefix;
            terms.emplace_back(s, Rational(-1));
            prog.add(std::move(terms), lp::Sense::Equal, target[c]);
            prog.objective[s] = Rational(1);
        }
        std::vector<std::pair<std::size_t, Rational>> row;
        for (ObjectId o = 0; o < m; ++o) row.emplace_back(var(i, o), Rational(1));
        prog.add(std::move(row), lp::Sense::LessEqual, Rational(1));
    }
    for (ObjectId o = 0; o < m; ++o) {
        std::vector<std::pair<std::size_t, Rational>> col;
        for (AgentId i = 0; i < n; ++i) col.emplace_back(var(i, o), Rational(1));
        prog.add(std::move(col), lp::Sense::LessEqual, problem.supply(o));
    }

    const auto res = lp::solve(prog);
    if (res.status != lp::Status::Optimal) {
        throw EngineError("sd-efficiency program did not reach an optimum");
    }
    if (res.value.is_zero()) return {Axiom::SdEfficiency, true, {}, ""};

    Assignment witness(n, m);
    for (AgentId i = 0; i < n; ++i) {
        for (ObjectId o = 0; o < m; ++o) witness(i, o) = res.x[var(i, o)];
    }
    if (!sd_dominates(problem, witness, p)) throw EngineError("sd-efficiency witness does not dominate");
    return {Axiom::SdEfficiency, false, DominatingAssignment{std::move(witness)},
            "dominated with total cumulative slack " + res.value.str()};
}

AxiomReport check_ete(const Problem& problem, const Assignment& p) {
    return over_pairs(
        Axiom::ETE, problem,
        [&](AgentId i, AgentId j) {
            return i < j && same_row(problem.endowments, i, j) && problem.preferences[i] == problem.preferences[j];
        },
        [&](AgentId i, AgentId j) { return same_row(p.shares, i, j); }, "is treated differently from");
}

AxiomReport check_eene(const Problem& problem, const Assignment& p) {
    return over_pairs(
        Axiom::EENE, problem, [&](AgentId i, AgentId j) { return same_row(problem.endowments, i, j); },
        [&](AgentId i, AgentId j) { return !envies(problem, p, i, j); }, "envies");
}

AxiomReport check_ef(const Problem& problem, const Assignment& p) {
    return over_pairs(
        Axiom::EF, problem, [](AgentId, AgentId) { return true; },
        [&](AgentId i, AgentId j) { return !envies(problem, p, i, j); }, "envies");
}

AxiomReport check_be(const Problem& problem, const Assignment& p) {
    return over_pairs(
        Axiom::BE, problem, [](AgentId, AgentId) { return true; },
        [&](AgentId i, AgentId j) {
            const auto& pref = problem.preferences[i];
            const auto ci = cumulative_profile(p.shares.row(i), pref);
            const auto cj = cumulative_profile(p.shares.row(j), pref);
            Rational envy;
            for (std::size_t c = 0; c < ci.size(); ++c) envy = max(envy, cj[c] - ci[c]);
            Rational advantage;
            for (ObjectId o = 0; o < problem.num_objects(); ++o) {
                const Rational d = problem.endowments(j, o) - problem.endowments(i, o);
                if (d.is_positive()) advantage += d;
            }
            return envy <= advantage;
        },
        "envies beyond the endowment advantage of");
}

AxiomReport check_stepwise(const Trace& trace, Axiom property) {
    if (property != Axiom::StepwiseETE && property != Axiom::StepwiseEEET && property != Axiom::BoundedAdvantage) {
        throw std::invalid_argument("check_stepwise: not a stepwise property");
    }
    auto fail = [&](std::size_t d, AgentId i, AgentId j, std::optional<ObjectId> o) {
        return AxiomReport{property, false, StepWitness{d, i, j, o},
                           "violated at step " + std::to_string(d)};
    };
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& rec = trace.steps[k];
        const auto& s = rec.state;
        const auto& lam = rec.params.ratio;
        const std::size_t d = k + 1;
        for (AgentId i = 0; i < s.num_agents(); ++i) {
            for (AgentId j = 0; j < s.num_agents(); ++j) {
                if (i == j) continue;
                switch (property) {
                    case Axiom::StepwiseETE:
                        if (i < j && same_row(s.endowments, i, j) && s.labels[i] == s.labels[j] &&
                            s.pointed[i] == s.pointed[j] && !same_row(lam, i, j)) {
                            return fail(d, i, j, std::nullopt);
                        }
                        break;
                    case Axiom::StepwiseEEET:
                        if (i < j && same_row(s.endowments, i, j)) {
                            for (ObjectId o = 0; o < s.num_objects(); ++o) {
                                if (s.remaining[o] && lam(i, o) != lam(j, o)) return fail(d, i, j, o);
                            }
                        }
                        break;
                    default:
                        for (ObjectId o = 0; o < s.num_objects(); ++o) {
                            if (!s.remaining[o] || s.endowments(i, o) < s.endowments(j, o)) continue;
                            if (lam(i, o) < lam(j, o) || rec.endowments_after(i, o) < rec.endowments_after(j, o)) {
                                return fail(d, i, j, o);
                            }
                        }
                        break;
                }
            }
        }
    }
    return {property, true, {}, ""};
}

AxiomReport check_axiom(Axiom axiom, const Problem& problem, const Assignment& p, const Trace* trace) {
    switch (axiom) {
        case Axiom::IR: return check_ir(problem, p);
        case Axiom::SdEfficiency: return check_sd_efficiency(problem, p);
        case Axiom::ETE: return check_ete(problem, p);
        case Axiom::EENE: return check_eene(problem, p);
        case Axiom::EF: return check_ef(problem, p);
        case Axiom::BE: return check_be(problem, p);
        default:
            if (trace == nullptr) throw InvalidInput(std::string(to_string(axiom)) + " needs a trace");
            return check_stepwise(*trace, axiom);
    }
}

std::vector<WeakPreference> enumerate_weak_orders(std::size_t m, std::size_t max_objects) {
    if (m > max_objects) {
        throw EnumerationBudgetExceeded("weak-order enumeration over " + std::to_string(m) +
                                        " objects exceeds the limit of " + std::to_string(max_objects));
    }
    std::vector<WeakPreference> out;
    // Assign each object a class label; keep labelings whose labels are exactly 0..k-1.
    std::vector<std::size_t> label(m, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t o) {
        if (o == m) {
            const std::size_t k = m == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;
            std::vector<std::vector<ObjectId>> classes(k);
            for (ObjectId x = 0; x < m; ++x) classes[label[x]].push_back(x);
            if (std::all_of(classes.begin(), classes.end(), [](const auto& c) { return !c.empty(); })) {
                out.emplace_back(std::move(classes), m);
            }
            return;
        }
        for (std::size_t c = 0; c < m; ++c) {
            label[o] = c;
            rec(o + 1);
        }
    };
    rec(0);
    return out;
}

namespace {

struct ManipulationSetup {
    std::vector<WeakPreference> orders;
    Assignment truthful;
};

ManipulationSetup manipulation_setup(const Problem& problem, const Policy& policy, AgentId agent,
                                     MisreportDomain domain, std::size_t max_objects) {
    if (agent >= problem.num_agents()) throw InvalidInput("find_manipulation: unknown agent");
    auto orders = enumerate_weak_orders(problem.num_objects(), max_objects);
    if (domain == MisreportDomain::Dichotomous) {
        std::erase_if(orders, [](const WeakPreference& w) { return w.num_classes() > 2; });
    }
    return {std::move(orders), run_fttc(problem, policy).assignment};
}

std::optional<Manipulation> try_misreport(const Problem& problem, const Policy& policy, ManipulationMode mode,
                                          AgentId agent, const ManipulationSetup& setup, std::size_t k) {
    Problem lie = problem;
    lie.preferences[agent] = setup.orders[k];
    Assignment outcome = run_fttc(lie, policy).assignment;
    const auto& truth = problem.preferences[agent];
    const auto verdict = sd_compare(outcome.lottery(agent), setup.truthful.lottery(agent), truth);
    const bool found = mode == ManipulationMode::Strong
                           ? verdict == DominanceVerdict::Strict
                           : !weakly_dominates(sd_compare(setup.truthful.lottery(agent), outcome.lottery(agent), truth));
    if (!found) return std::nullopt;
    return Manipulation{k, setup.orders[k], std::move(outcome), verdict};
}

}  // namespace

std::optional<Manipulation> find_manipulation_serial(const Problem& problem, const Policy& policy,
                                                     ManipulationMode mode, AgentId agent, MisreportDomain domain,
                                                     std::size_t max_objects) {
    const auto setup = manipulation_setup(problem, policy, agent, domain, max_objects);
    for (std::size_t k = 0; k < setup.orders.size(); ++k) {
        if (auto m = try_misreport(problem, policy, mode, agent, setup, k)) return m;
    }
    return std::nullopt;
}

std::optional<Manipulation> find_manipulation(const Problem& problem, const Policy& policy, ManipulationMode mode,
                                              AgentId agent, MisreportDomain domain, std::size_t max_objects) {
    const auto setup = manipulation_setup(problem, policy, agent, domain, max_objects);
    const auto count = static_cast<long>(setup.orders.size());
    std::vector<std::optional<Manipulation>> found(setup.orders.size());
    bool failed = false;
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < count; ++k) {
        try {
            found[static_cast<std::size_t>(k)] =
                try_misreport(problem, policy, mode, agent, setup, static_cast<std::size_t>(k));
        } catch (const std::exception& e) {
#pragma omp critical
            {
                failed = true;
                error = e.what();
            }
        }
    }
    if (failed) throw EngineError("find_manipulation: " + error);
    for (auto& f : found) {
        if (f) return std::move(f);
    }
    return std::nullopt;
}

}  // namespace fttc
