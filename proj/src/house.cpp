#include "fttc/house.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>

#include "fttc/errors.hpp"
#include "fttc/linalg.hpp"
#include "fttc/lp.hpp"

namespace fttc {

bool DichotomousProblem::accepts(AgentId i, ObjectId o) const {
    return std::binary_search(acceptable[i].begin(), acceptable[i].end(), o);
}

DichotomousProblem dichotomous_from_problem(const Problem& problem) {
    const std::size_t m = problem.num_objects();
    std::vector<bool> wanted(m, false);
    std::vector<ObjectSet> accepted(problem.num_agents());
    for (AgentId i = 0; i < problem.num_agents(); ++i) {
        const auto& pref = problem.preferences[i];
        if (pref.num_classes() > 2) {
            throw InvalidInput("agent " + problem.agents[i] + " has more than two indifference classes");
        }
        accepted[i] = pref.classes().front();
        for (ObjectId o : accepted[i]) wanted[o] = true;
    }
    std::vector<ObjectId> index(m, 0);
    DichotomousProblem out;
    out.agents = problem.agents;
    for (ObjectId o = 0; o < m; ++o) {
        if (!wanted[o]) continue;
        index[o] = out.objects.size();
        out.objects.push_back(problem.objects[o]);
    }
    for (auto& c : accepted) {
        ObjectSet mapped;
        for (ObjectId o : c) mapped.push_back(index[o]);
        std::sort(mapped.begin(), mapped.end());
        out.acceptable.push_back(std::move(mapped));
    }
    return out;
}

namespace {

std::uint64_t object_mask(const ObjectSet& s) {
    std::uint64_t m = 0;
    for (ObjectId o : s) m |= std::uint64_t{1} << o;
    return m;
}

ObjectSet mask_objects(std::uint64_t m) {
    ObjectSet out;
    for (ObjectId o = 0; m != 0; ++o, m >>= 1) {
        if (m & 1U) out.push_back(o);
    }
    return out;
}

}  // namespace

void validate_dichotomous(const DichotomousProblem& problem) {
    const std::size_t n = problem.num_agents();
    const std::size_t m = problem.num_objects();
    if (m == 0) throw InvalidInput("no acceptable objects");
    if (m > 20) throw EnumerationBudgetExceeded("shortage check over more than 20 objects");
    if (n < m) throw InvalidInput("fewer agents than objects");
    std::vector<std::uint64_t> acc(n);
    for (AgentId i = 0; i < n; ++i) acc[i] = object_mask(problem.acceptable[i]);
    const std::uint64_t all = (std::uint64_t{1} << m) - 1;
    if (std::accumulate(acc.begin(), acc.end(), std::uint64_t{0}, std::bit_or<>()) != all) {
        throw InvalidInput("some object is acceptable to nobody");
    }
    for (std::uint64_t sub = 1; sub < all; ++sub) {
        std::size_t demanders = 0;
        for (auto a : acc) demanders += (a & sub) != 0 ? 1 : 0;
        if (demanders <= static_cast<std::size_t>(std::popcount(sub))) {
            std::string names;
            for (ObjectId o : mask_objects(sub)) names += (names.empty() ? "" : ",") + problem.objects[o];
            throw InvalidInput("no shortage on objects {" + names + "}");
        }
    }
}

Problem to_house_problem(const DichotomousProblem& dp) {
    const std::size_t n = dp.num_agents();
    const std::size_t m = dp.num_objects();
    if (n < m) throw InvalidInput("fewer agents than objects");
    Problem p;
    p.agents = dp.agents;
    p.objects = dp.objects;
    for (std::size_t k = 0; p.objects.size() < n; ++k) {
        std::string name = "null" + std::to_string(k + 1);
        if (std::find(p.objects.begin(), p.objects.end(), name) == p.objects.end()) p.objects.push_back(name);
    }
    p.endowments = Matrix(n, n);
    const Rational share(1, static_cast<long>(n));
    for (AgentId i = 0; i < n; ++i) {
        for (ObjectId o = 0; o < n; ++o) p.endowments(i, o) = share;
        std::vector<std::vector<ObjectId>> classes{dp.acceptable[i], {}};
        for (ObjectId o = 0; o < n; ++o) {
            if (o >= m || !dp.accepts(i, o)) classes[1].push_back(o);
        }
        if (classes[1].empty()) classes.pop_back();
        if (classes[0].empty()) classes.erase(classes.begin());
        p.preferences.emplace_back(std::move(classes), n);
    }
    return p;
}

ObjectSet gamma_set(const DichotomousProblem& problem, const AgentSet& agents, const ObjectSet& among) {
    ObjectSet out;
    for (ObjectId o : among) {
        if (std::any_of(agents.begin(), agents.end(), [&](AgentId i) { return problem.accepts(i, o); })) {
            out.push_back(o);
        }
    }
    return out;
}

namespace {

// Ratio g / y as a pair, compared by cross-multiplication.
struct Ratio {
    std::uint64_t g = 0;
    std::uint64_t y = 1;
    bool operator<(const Ratio& o) const { return g * o.y < o.g * y; }
    bool operator==(const Ratio& o) const { return g * o.y == o.g * y; }
};

struct StageInput {
    std::vector<AgentId> agents;      // remaining agents Z
    std::vector<std::uint64_t> acc;   // their acceptable masks within P
};

Ratio ratio_of(const StageInput& in, std::uint64_t sub) {
    const auto y = static_cast<std::uint64_t>(std::popcount(sub));
    std::uint64_t objs = 0;
    for (std::size_t k = 0; sub != 0; ++k, sub >>= 1) {
        if (sub & 1U) objs |= in.acc[k];
    }
    return Ratio{static_cast<std::uint64_t>(std::popcount(objs)), y};
}

std::uint64_t minimizers_serial(const StageInput& in) {
    const std::uint64_t full = (std::uint64_t{1} << in.agents.size()) - 1;
    Ratio best{1, 0};  // infinity
    std::uint64_t uni = 0;
    for (std::uint64_t sub = 1; sub <= full; ++sub) {
        const Ratio r = ratio_of(in, sub);
        if (best.y == 0 || r < best) {
            best = r;
            uni = sub;
        } else if (r == best) {
            uni |= sub;
        }
    }
    return uni;
}

std::uint64_t minimizers_parallel(const StageInput& in) {
    const auto full = static_cast<long long>((std::uint64_t{1} << in.agents.size()) - 1);
    // Pass 1: minimal ratio. Pass 2: union of minimizers. Both reductions are order-free.
    std::uint64_t best_g = 1, best_y = 0;
#pragma omp parallel
    {
        Ratio local{1, 0};
#pragma omp for nowait
        for (long long sub = 1; sub <= full; ++sub) {
            const Ratio r = ratio_of(in, static_cast<std::uint64_t>(sub));
            if (local.y == 0 || r < local) local = r;
        }
#pragma omp critical
        {
            if (local.y != 0 && (best_y == 0 || local < Ratio{best_g, best_y})) {
                best_g = local.g;
                best_y = local.y;
            }
        }
    }
    const Ratio best{best_g, best_y};
    std::uint64_t uni = 0;
#pragma omp parallel for reduction(| : uni)
    for (long long sub = 1; sub <= full; ++sub) {
        if (ratio_of(in, static_cast<std::uint64_t>(sub)) == best) uni |= static_cast<std::uint64_t>(sub);
    }
    return uni;
}

EgalitarianSolution egalitarian_impl(const DichotomousProblem& problem, bool parallel) {
    validate_dichotomous(problem);
    const std::size_t n = problem.num_agents();
    if (n > 24) throw EnumerationBudgetExceeded("bottleneck enumeration over more than 24 agents");

    EgalitarianSolution sol;
    sol.welfare.assign(n, Rational());
    std::vector<AgentId> remaining(n);
    std::iota(remaining.begin(), remaining.end(), 0);
    std::uint64_t objects_left = (std::uint64_t{1} << problem.num_objects()) - 1;

    while (!remaining.empty()) {
        StageInput in{remaining, {}};
        for (AgentId i : remaining) in.acc.push_back(object_mask(problem.acceptable[i]) & objects_left);
        const std::uint64_t chosen = parallel ? minimizers_parallel(in) : minimizers_serial(in);

        Bottleneck b;
        std::uint64_t objs = 0;
        std::vector<AgentId> rest;
        for (std::size_t k = 0; k < remaining.size(); ++k) {
            if (chosen >> k & 1U) {
                b.agents.push_back(remaining[k]);
                objs |= in.acc[k];
            } else {
                rest.push_back(remaining[k]);
            }
        }
        b.objects = mask_objects(objs);
        b.welfare = Rational(static_cast<long>(b.objects.size()), static_cast<long>(b.agents.size()));
        for (AgentId i : b.agents) sol.welfare[i] = b.welfare;
        objects_left &= ~objs;
        remaining = std::move(rest);
        sol.bottlenecks.push_back(std::move(b));
    }
    return sol;
}

}  // namespace

EgalitarianSolution egalitarian_solution(const DichotomousProblem& problem) { return egalitarian_impl(problem, true); }

EgalitarianSolution egalitarian_solution_serial(const DichotomousProblem& problem) {
    return egalitarian_impl(problem, false);
}

Assignment egalitarian_assignment(const DichotomousProblem& problem, const BottleneckSequence& seq) {
    const std::size_t m = problem.num_objects();
    Assignment out(problem.num_agents(), m);
    for (const auto& b : seq) {
        std::vector<std::pair<AgentId, ObjectId>> vars;
        for (AgentId i : b.agents) {
            for (ObjectId o : b.objects) {
                if (problem.accepts(i, o)) vars.emplace_back(i, o);
            }
        }
        lp::LinearProgram prog(vars.size());
        for (AgentId i : b.agents) {
            std::vector<std::pair<std::size_t, Rational>> row;
            for (std::size_t v = 0; v < vars.size(); ++v) {
                if (vars[v].first == i) row.emplace_back(v, Rational(1));
            }
            prog.add(std::move(row), lp::Sense::Equal, b.welfare);
        }
        for (ObjectId o : b.objects) {
            std::vector<std::pair<std::size_t, Rational>> col;
            for (std::size_t v = 0; v < vars.size(); ++v) {
                if (vars[v].second == o) col.emplace_back(v, Rational(1));
            }
            prog.add(std::move(col), lp::Sense::LessEqual, Rational(1));
        }
        const auto res = lp::solve(prog);
        if (res.status != lp::Status::Optimal) throw EngineError("bottleneck welfare is not realizable");
        for (std::size_t v = 0; v < vars.size(); ++v) out(vars[v].first, vars[v].second) = res.x[v];
    }
    return out;
}

std::vector<Rational> welfare(const Problem& problem, const Assignment& p) {
    std::vector<Rational> out(problem.num_agents());
    for (AgentId i = 0; i < problem.num_agents(); ++i) {
        for (ObjectId o : problem.preferences[i].classes().front()) out[i] += p(i, o);
    }
    return out;
}

std::vector<bool> real_objects(const Problem& problem) {
    std::vector<bool> real(problem.num_objects(), false);
    for (const auto& pref : problem.preferences) {
        if (pref.num_classes() > 2) throw InvalidInput("not a dichotomous problem");
        for (ObjectId o : pref.classes().front()) real[o] = true;
    }
    return real;
}

std::vector<ShrinkEvent> shrink_events(const Trace& trace, const std::vector<bool>& real) {
    std::vector<ShrinkEvent> out;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& rec = trace.steps[k];
        ShrinkEvent ev{k + 1, {}, {}};
        for (ObjectId o = 0; o < real.size(); ++o) {
            const bool after = k + 1 < trace.steps.size() && trace.steps[k + 1].state.available[o];
            if (real[o] && rec.state.available[o] && !after) ev.objects.push_back(o);
        }
        if (ev.objects.empty()) continue;
        for (AgentId i = 0; i < rec.assignment_after.rows(); ++i) {
            if (std::any_of(ev.objects.begin(), ev.objects.end(),
                            [&](ObjectId o) { return rec.assignment_after(i, o).is_positive(); })) {
                ev.agents.push_back(i);
            }
        }
        out.push_back(std::move(ev));
    }
    return out;
}

EatingSchedule run_eating(const Problem& problem, const Policy& policy) {
    if (!is_house_allocation(problem)) throw InvalidInput("eating needs a house-allocation problem");
    if (policy.kind() == Policy::Kind::Custom) throw InvalidInput("eating needs the equal, proportional or leveling policy");
    const std::size_t n = problem.num_agents();
    const std::size_t m = problem.num_objects();

    EatingSchedule out;
    StepState state = initial_state(problem);
    Rational t;
    const Rational one(1);
    while (state.any_remaining()) {
        if (out.intervals.size() > 4 * n * n + 16) throw EngineError("eating: too many breakpoints");
        const StepState s = pointing_stage(problem, labeling_stage(problem, state));
        const Matrix lam = make_parameters(policy, problem, s).ratio;
        const Matrix gamma = uniform_division(s);

        // (I - M) r = 1 with M(i, j) = sum over i's labels o of lam(i, o) gamma(j, o).
        Matrix sys(n, n);
        for (AgentId i = 0; i < n; ++i) {
            sys(i, i) = one;
            for (ObjectId o : s.labels[i]) {
                for (AgentId j = 0; j < n; ++j) {
                    if (!gamma(j, o).is_zero()) sys(i, j) -= lam(i, o) * gamma(j, o);
                }
            }
        }
        auto rates = solve_square(std::move(sys), std::vector<Rational>(n, one));
        if (!rates) throw EngineError("eating: singular rate system");

        std::vector<Rational> flow(m);  // total eating rate of each object
        for (AgentId j = 0; j < n; ++j) {
            for (ObjectId o : s.pointed[j]) flow[o] += gamma(j, o) * (*rates)[j];
        }

        Rational dt = one - t;
        for (ObjectId o = 0; o < m; ++o) {
            if (flow[o].is_zero()) continue;
            for (AgentId i = 0; i < n; ++i) {
                if (lam(i, o).is_zero()) continue;
                const Rational& stock = s.remaining[o] ? state.endowments(i, o) : state.assignment(i, o);
                dt = min(dt, stock / (lam(i, o) * flow[o]));
            }
        }
        if (!dt.is_positive()) throw EngineError("eating: no time elapses");

        for (ObjectId o = 0; o < m; ++o) {
            if (flow[o].is_zero()) continue;
            for (AgentId i = 0; i < n; ++i) {
                if (lam(i, o).is_zero()) continue;
                const Rational eaten = lam(i, o) * flow[o] * dt;
                (s.remaining[o] ? state.endowments(i, o) : state.assignment(i, o)) -= eaten;
            }
        }
        for (AgentId j = 0; j < n; ++j) {
            for (ObjectId o : s.pointed[j]) state.assignment(j, o) += gamma(j, o) * (*rates)[j] * dt;
        }
        for (ObjectId o = 0; o < m; ++o) {
            if (state.remaining[o]) state.remaining[o] = state.endowments.col_sum(o).is_positive();
        }
        out.intervals.push_back(EatingInterval{t, t + dt, std::move(*rates), s.pointed, s.labels});
        t += dt;
    }
    if (t != one) throw EngineError("eating ended at time " + t.str());
    out.assignment = Assignment(state.assignment);
    return out;
}

namespace {

// Kuhn's augmenting paths; size of a maximum matching.
std::size_t max_matching_size(const DichotomousProblem& p) {
    std::vector<std::size_t> owner(p.num_objects(), p.num_agents());
    std::function<bool(AgentId, std::vector<bool>&)> augment = [&](AgentId i, std::vector<bool>& seen) {
        for (ObjectId o : p.acceptable[i]) {
            if (seen[o]) continue;
            seen[o] = true;
            if (owner[o] == p.num_agents() || augment(owner[o], seen)) {
                owner[o] = i;
                return true;
            }
        }
        return false;
    };
    std::size_t size = 0;
    for (AgentId i = 0; i < p.num_agents(); ++i) {
        std::vector<bool> seen(p.num_objects(), false);
        if (augment(i, seen)) ++size;
    }
    return size;
}

using Bits = std::vector<std::uint64_t>;

struct RpTables {
    std::vector<std::vector<std::size_t>> matchings;
    std::vector<Bits> matched;  // per agent: matchings in which the agent is matched
    std::size_t words = 0;
};

RpTables rp_tables(const DichotomousProblem& problem, std::size_t max_agents) {
    if (problem.num_agents() > max_agents) {
        throw EnumerationBudgetExceeded("random priority over " + std::to_string(problem.num_agents()) +
                                        " agents exceeds the limit of " + std::to_string(max_agents));
    }
    RpTables t;
    t.matchings = maximum_matchings(problem);
    t.words = (t.matchings.size() + 63) / 64;
    t.matched.assign(problem.num_agents(), Bits(t.words, 0));
    for (std::size_t k = 0; k < t.matchings.size(); ++k) {
        for (AgentId i = 0; i < problem.num_agents(); ++i) {
            if (t.matchings[k][i] != problem.num_objects()) t.matched[i][k / 64] |= std::uint64_t{1} << (k % 64);
        }
    }
    return t;
}

// Survivor counts keyed by survivor-set size: hits[size][k] orderings end with k among `size` survivors.
using Hits = std::map<std::size_t, std::vector<std::uint64_t>>;

void refine(const RpTables& t, const std::vector<AgentId>& order, Bits& cur, Bits& next, Hits& hits) {
    std::fill(cur.begin(), cur.end(), ~std::uint64_t{0});
    if (t.matchings.size() % 64 != 0) cur.back() = (std::uint64_t{1} << (t.matchings.size() % 64)) - 1;
    for (AgentId a : order) {
        bool any = false;
        for (std::size_t w = 0; w < t.words; ++w) {
            next[w] = cur[w] & t.matched[a][w];
            any = any || next[w] != 0;
        }
        if (any) cur.swap(next);
    }
    std::size_t size = 0;
    for (auto w : cur) size += static_cast<std::size_t>(std::popcount(w));
    auto& row = hits[size];
    if (row.empty()) row.assign(t.matchings.size(), 0);
    for (std::size_t w = 0; w < t.words; ++w) {
        for (std::uint64_t bits = cur[w]; bits != 0; bits &= bits - 1) ++row[w * 64 + std::countr_zero(bits)];
    }
}

Assignment rp_assemble(const DichotomousProblem& problem, const RpTables& t, const Hits& hits,
                       std::uint64_t orderings) {
    std::vector<Rational> weight(t.matchings.size());
    for (const auto& [size, row] : hits) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] != 0) weight[k] += Rational(static_cast<long>(row[k]), static_cast<long>(size));
        }
    }
    Assignment out(problem.num_agents(), problem.num_objects());
    for (std::size_t k = 0; k < t.matchings.size(); ++k) {
        if (weight[k].is_zero()) continue;
        for (AgentId i = 0; i < problem.num_agents(); ++i) {
            if (t.matchings[k][i] != problem.num_objects()) out(i, t.matchings[k][i]) += weight[k];
        }
    }
    const Rational scale(1, static_cast<long>(orderings));
    for (AgentId i = 0; i < out.num_agents(); ++i) {
        for (ObjectId o = 0; o < out.num_objects(); ++o) out(i, o) *= scale;
    }
    return out;
}

std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t k = 2; k <= n; ++k) f *= k;
    return f;
}

// Permutation of 0..n-1 with lexicographic rank r.
std::vector<AgentId> unrank(std::size_t n, std::uint64_t r) {
    std::vector<AgentId> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<AgentId> out;
    for (std::size_t k = n; k > 0; --k) {
        const std::uint64_t f = factorial(k - 1);
        const auto idx = static_cast<std::size_t>(r / f);
        r %= f;
        out.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return out;
}

void merge_hits(Hits& into, const Hits& from) {
    for (const auto& [size, row] : from) {
        auto& dst = into[size];
        if (dst.empty()) dst.assign(row.size(), 0);
        for (std::size_t k = 0; k < row.size(); ++k) dst[k] += row[k];
    }
}

}  // namespace

std::vector<std::vector<std::size_t>> maximum_matchings(const DichotomousProblem& problem) {
    const std::size_t n = problem.num_agents();
    const std::size_t m = problem.num_objects();
    const std::size_t target = max_matching_size(problem);
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(n, m);
    std::vector<bool> used(m, false);
    std::function<void(AgentId, std::size_t)> rec = [&](AgentId i, std::size_t size) {
        if (size + (n - i) < target) return;
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (ObjectId o : problem.acceptable[i]) {
            if (used[o]) continue;
            used[o] = true;
            cur[i] = o;
            rec(i + 1, size + 1);
            used[o] = false;
        }
        cur[i] = m;
        rec(i + 1, size);
    };
    rec(0, 0);
    return out;
}

Assignment run_rp_serial(const DichotomousProblem& problem, std::size_t max_agents) {
    const auto t = rp_tables(problem, max_agents);
    std::vector<AgentId> order(problem.num_agents());
    std::iota(order.begin(), order.end(), 0);
    Hits hits;
    Bits cur(t.words), next(t.words);
    std::uint64_t count = 0;
    do {
        refine(t, order, cur, next, hits);
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    return rp_assemble(problem, t, hits, count);
}

Assignment run_rp(const DichotomousProblem& problem, std::size_t max_agents) {
    const auto t = rp_tables(problem, max_agents);
    const std::size_t n = problem.num_agents();
    const auto total = static_cast<long long>(factorial(n));
    Hits hits;
#pragma omp parallel
    {
        Hits local;
        Bits cur(t.words), next(t.words);
#pragma omp for schedule(static)
        for (long long r = 0; r < total; ++r) refine(t, unrank(n, static_cast<std::uint64_t>(r)), cur, next, local);
#pragma omp critical
        merge_hits(hits, local);
    }
    return rp_assemble(problem, t, hits, static_cast<std::uint64_t>(total));
}

}  // namespace fttc
