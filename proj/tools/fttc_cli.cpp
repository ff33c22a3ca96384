// fttc: command-line front end for the FTTC mechanism and its checkers.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>

#include "fttc/axioms.hpp"
#include "fttc/engine.hpp"
#include "fttc/errors.hpp"
#include "fttc/house.hpp"
#include "fttc/problem_io.hpp"
#include "fttc/report.hpp"

namespace {

using namespace fttc;

enum Exit { Ok = 0, Internal = 1, Invalid = 2, AxiomFailure = 3, Budget = 4 };

struct Options {
    std::string problem_file;
    std::string assignment_file;
    std::string policy = "equal";
    std::string checks;
    std::string format = "json";
    bool trace = false;
};

Problem load_problem(const std::string& path) {
    Problem p = parse_problem(read_file(path));
    const auto rep = validate_problem(p);
    if (!rep.ok()) {
        std::string msg = "invalid problem:";
        for (const auto& v : rep.violations) msg += "\n  " + std::string(to_string(v.kind)) + ": " + v.message;
        throw InvalidInput(msg);
    }
    return p;
}

Policy load_policy(const std::string& spec, const Problem& problem) {
    const std::string prefix = "custom:";
    if (spec.rfind(prefix, 0) != 0) return policy_from_name(spec);
    const std::string path = spec.substr(prefix.size());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("weights") || !j.at("weights").is_object()) {
        throw ParseError(path + ": expected {\"weights\": {agent: weight}}");
    }
    std::vector<Rational> weights(problem.num_agents(), Rational(1));
    for (const auto& [agent, w] : j.at("weights").items()) {
        const auto i = problem.find_agent(agent);
        if (!i) throw ParseError(path + ": unknown agent \"" + agent + "\"");
        weights[*i] = rational_from_json(w);
    }
    return Policy::weighted(spec, std::move(weights));
}

std::vector<Axiom> parse_checks(const std::string& list) {
    std::vector<Axiom> out;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        const auto a = axiom_from_name(name);
        if (!a) throw InvalidInput("unknown axiom \"" + name + "\"");
        out.push_back(*a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RunReport base_report(const std::string& command, const Problem& p) {
    RunReport r;
    r.command = command;
    r.agents = p.agents;
    r.objects = p.objects;
    return r;
}

int emit(const RunReport& r, const Options& opt) {
    std::cout << (opt.format == "table" ? render_table(r) : render_json(r));
    const bool failed = std::any_of(r.axioms.begin(), r.axioms.end(), [](const AxiomReport& a) { return !a.holds; });
    return failed ? AxiomFailure : Ok;
}

int cmd_solve(const Options& opt) {
    const Problem p = load_problem(opt.problem_file);
    const Policy policy = load_policy(opt.policy, p);
    const auto checks = parse_checks(opt.checks);
    RunResult run;
    try {
        run = run_fttc(p, policy, RunOptions{default_step_budget()});
    } catch (const StepBudgetExceeded& e) {
        std::cerr << "fttc: " << e.what() << "\n";
        RunReport r = base_report("solve", p);
        r.policy = policy.name();
        r.steps = e.trace().steps.size();
        if (!e.trace().steps.empty()) r.assignment = Assignment(e.trace().steps.back().assignment_after);
        else r.assignment = Assignment(p.num_agents(), p.num_objects());
        r.trace = trace_to_json(p, e.trace());
        std::cout << render_json(r);
        return Budget;
    }
    RunReport r = base_report("solve", p);
    r.policy = policy.name();
    r.steps = run.trace.steps.size();
    r.assignment = run.assignment;
    for (Axiom a : checks) r.axioms.push_back(check_axiom(a, p, run.assignment, &run.trace));
    if (opt.trace) r.trace = trace_to_json(p, run.trace);
    return emit(r, opt);
}

int cmd_egalitarian(const Options& opt) {
    const auto d = dichotomous_from_problem(parse_problem(read_file(opt.problem_file)));
    const auto sol = egalitarian_solution(d);
    RunReport r;
    r.command = "egalitarian";
    r.agents = d.agents;
    r.objects = d.objects;
    r.assignment = egalitarian_assignment(d, sol.bottlenecks);
    r.bottlenecks = sol.bottlenecks;
    return emit(r, opt);
}

int cmd_rp(const Options& opt) {
    const auto d = dichotomous_from_problem(parse_problem(read_file(opt.problem_file)));
    validate_dichotomous(d);
    RunReport r;
    r.command = "rp";
    r.agents = d.agents;
    r.objects = d.objects;
    r.assignment = run_rp(d);
    return emit(r, opt);
}

int cmd_eat(const Options& opt) {
    const Problem p = load_problem(opt.problem_file);
    const Policy policy = load_policy(opt.policy, p);
    RunReport r = base_report("eat", p);
    r.policy = policy.name();
    r.assignment = run_eating(p, policy).assignment;
    for (Axiom a : parse_checks(opt.checks)) {
        if (a == Axiom::StepwiseETE || a == Axiom::StepwiseEEET || a == Axiom::BoundedAdvantage) {
            throw InvalidInput(std::string(to_string(a)) + " needs a trace; use solve");
        }
        r.axioms.push_back(check_axiom(a, p, r.assignment));
    }
    return emit(r, opt);
}

int cmd_check(const Options& opt) {
    const Problem p = load_problem(opt.problem_file);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(opt.assignment_file));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(opt.assignment_file + ": " + e.what());
    }
    const Assignment a = assignment_from_json(p, j.contains("command") && j.contains("assignment") ? j.at("assignment") : j);
    auto checks = parse_checks(opt.checks.empty() ? "ir,sd-efficiency,ete,eene,ef,be" : opt.checks);
    RunReport r = base_report("check", p);
    r.assignment = a;
    for (Axiom ax : checks) {
        if (ax == Axiom::StepwiseETE || ax == Axiom::StepwiseEEET || ax == Axiom::BoundedAdvantage) {
            throw InvalidInput(std::string(to_string(ax)) + " needs a trace; use solve");
        }
        r.axioms.push_back(check_axiom(ax, p, a));
    }
    return emit(r, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional top trading cycles: assignments and axiom checks"};
    app.require_subcommand(1);
    Options opt;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    };
    auto add_policy = [&](CLI::App* sub) {
        sub->add_option("--policy", opt.policy, "equal | proportional | leveling | custom:<weights.json>");
    };

    auto* solve = app.add_subcommand("solve", "Run FTTC on a problem");
    solve->add_option("problem", opt.problem_file, "Problem JSON")->required();
    add_policy(solve);
    solve->add_flag("--trace", opt.trace, "Include the step-by-step trace");
    solve->add_option("--check", opt.checks, "Comma-separated axioms to verify");
    add_format(solve);

    auto* egal = app.add_subcommand("egalitarian", "Egalitarian solution of a dichotomous problem");
    egal->add_option("problem", opt.problem_file, "Problem JSON")->required();
    add_format(egal);

    auto* rp = app.add_subcommand("rp", "Random priority on a dichotomous problem");
    rp->add_option("problem", opt.problem_file, "Problem JSON")->required();
    add_format(rp);

    auto* eat = app.add_subcommand("eat", "Eating simulation on a house-allocation problem");
    eat->add_option("problem", opt.problem_file, "Problem JSON")->required();
    add_policy(eat);
    eat->add_option("--check", opt.checks, "Comma-separated axioms to verify");
    add_format(eat);

    auto* check = app.add_subcommand("check", "Verify axioms for a given assignment");
    check->add_option("problem", opt.problem_file, "Problem JSON")->required();
    check->add_option("assignment", opt.assignment_file, "Assignment JSON or report")->required();
    check->add_option("--check", opt.checks, "Comma-separated axioms (default: all non-stepwise)");
    add_format(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Invalid;
    }

    try {
        if (*solve) return cmd_solve(opt);
        if (*egal) return cmd_egalitarian(opt);
        if (*rp) return cmd_rp(opt);
        if (*eat) return cmd_eat(opt);
        return cmd_check(opt);
    } catch (const ParseError& e) {
        std::cerr << "fttc: parse error: " << e.what() << "\n";
        return Invalid;
    } catch (const InvalidInput& e) {
        std::cerr << "fttc: invalid input: " << e.what() << "\n";
        return Invalid;
    } catch (const EnumerationBudgetExceeded& e) {
        std::cerr << "fttc: " << e.what() << "\n";
        return Budget;
    } catch (const EngineError& e) {
        std::cerr << "fttc: internal error: " << e.what() << "\n";
        return Internal;
    } catch (const std::runtime_error& e) {
        // I/O failures
        std::cerr << "fttc: " << e.what() << "\n";
        return Invalid;
    } catch (const std::exception& e) {
        std::cerr << "fttc: internal error: " << e.what() << "\n";
        return Internal;
    }
}
