#include "fttc/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "fttc/errors.hpp"
#include "fttc/problem_io.hpp"

namespace fttc {

using nlohmann::json;

namespace {

json name_list(const std::vector<std::string>& names, const std::vector<std::size_t>& ids) {
    json out = json::array();
    for (auto id : ids) out.push_back(names[id]);
    return out;
}

json name_list(const std::vector<std::string>& names, const std::vector<bool>& mask) {
    json out = json::array();
    for (std::size_t k = 0; k < mask.size(); ++k) {
        if (mask[k]) out.push_back(names[k]);
    }
    return out;
}

std::size_t index_of(const std::vector<std::string>& names, const json& name) {
    if (!name.is_string()) throw ParseError("expected a name, got " + name.dump());
    const auto it = std::find(names.begin(), names.end(), name.get<std::string>());
    if (it == names.end()) throw ParseError("unknown name " + name.dump());
    return static_cast<std::size_t>(it - names.begin());
}

std::vector<std::size_t> index_list(const std::vector<std::string>& names, const json& arr) {
    if (!arr.is_array()) throw ParseError("expected a name list");
    std::vector<std::size_t> out;
    for (const auto& n : arr) out.push_back(index_of(names, n));
    return out;
}

std::vector<std::string> string_list(const json& arr) {
    if (!arr.is_array()) throw ParseError("expected a string list");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw ParseError("expected a string list");
        out.push_back(v.get<std::string>());
    }
    return out;
}

json volumes(const std::vector<std::string>& names, const std::vector<std::size_t>& ids,
             const std::vector<Rational>& values) {
    json out = json::object();
    for (std::size_t k = 0; k < ids.size(); ++k) out[names[ids[k]]] = rational_to_json(values[k]);
    return out;
}

json per_agent_lists(const Problem& problem, const std::vector<std::vector<ObjectId>>& lists) {
    json out = json::object();
    for (AgentId i = 0; i < lists.size(); ++i) {
        if (!lists[i].empty()) out[problem.agents[i]] = name_list(problem.objects, lists[i]);
    }
    return out;
}

json witness_to_json(const RunReport& r, const Witness& w) {
    return std::visit(
        [&](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, AgentWitness>) {
                return {{"type", "agent"}, {"agent", r.agents[v.agent]}};
            } else if constexpr (std::is_same_v<T, PairWitness>) {
                return {{"type", "pair"}, {"agent", r.agents[v.agent]}, {"other", r.agents[v.other]}};
            } else if constexpr (std::is_same_v<T, DominatingAssignment>) {
                return {{"type", "dominating-assignment"},
                        {"assignment", shares_to_json(r.agents, r.objects, v.assignment.shares)}};
            } else {
                json out = {{"type", "step"},
                            {"step", v.step},
                            {"agent", r.agents[v.agent]},
                            {"other", r.agents[v.other]}};
                if (v.object) out["object"] = r.objects[*v.object];
                return out;
            }
        },
        w);
}

Witness witness_from_json(const RunReport& r, const json& j) {
    if (j.is_null()) return std::monostate{};
    const std::string type = j.at("type").get<std::string>();
    if (type == "agent") return AgentWitness{index_of(r.agents, j.at("agent"))};
    if (type == "pair") return PairWitness{index_of(r.agents, j.at("agent")), index_of(r.agents, j.at("other"))};
    if (type == "dominating-assignment") {
        return DominatingAssignment{Assignment(shares_from_json(r.agents, r.objects, j.at("assignment")))};
    }
    if (type == "step") {
        StepWitness w{j.at("step").get<std::size_t>(), index_of(r.agents, j.at("agent")),
                      index_of(r.agents, j.at("other")), std::nullopt};
        if (j.contains("object")) w.object = index_of(r.objects, j.at("object"));
        return w;
    }
    throw ParseError("unknown witness type \"" + type + "\"");
}

}  // namespace

json trace_to_json(const Problem& problem, const Trace& trace) {
    json steps = json::array();
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& rec = trace.steps[k];
        const auto& s = rec.state;
        const auto& g = rec.graph;
        json rounds = json::array();
        for (const auto& r : s.label_rounds) {
            rounds.push_back({{"agents", name_list(problem.agents, r.agents)},
                              {"objects", name_list(problem.objects, r.objects)}});
        }
        steps.push_back({
            {"step", k + 1},
            {"remaining", name_list(problem.objects, s.remaining)},
            {"available", name_list(problem.objects, s.available)},
            {"labels", per_agent_lists(problem, s.labels)},
            {"label_rounds", std::move(rounds)},
            {"active", name_list(problem.agents, s.active)},
            {"pointed", per_agent_lists(problem, s.pointed)},
            {"ratio", shares_to_json(problem.agents, problem.objects, rec.params.ratio)},
            {"quota", shares_to_json(problem.agents, problem.objects, rec.params.quota)},
            {"division", shares_to_json(problem.agents, problem.objects, rec.params.division)},
            {"agent_volume", volumes(problem.agents, g.agents, rec.solution.agent_volume)},
            {"object_volume", volumes(problem.objects, g.objects, rec.solution.object_volume)},
            {"consumption_loss", volumes(problem.agents, g.agents, rec.solution.consumption_loss)},
            {"net_consumption", volumes(problem.agents, g.agents, rec.solution.net_consumption)},
            {"exhausted", name_list(problem.objects, rec.exhausted)},
            {"endowments_after", shares_to_json(problem.agents, problem.objects, rec.endowments_after)},
            {"assignment_after", shares_to_json(problem.agents, problem.objects, rec.assignment_after)},
        });
    }
    return steps;
}

json report_to_json(const RunReport& r) {
    json out = {{"command", r.command},
                {"agents", r.agents},
                {"objects", r.objects},
                {"assignment", shares_to_json(r.agents, r.objects, r.assignment.shares)}};
    if (r.policy) out["policy"] = *r.policy;
    if (r.steps) out["steps"] = *r.steps;
    if (!r.axioms.empty()) {
        json ax = json::object();
        for (const auto& a : r.axioms) {
            json entry = {{"holds", a.holds}};
            if (!a.holds) {
                entry["detail"] = a.detail;
                entry["witness"] = witness_to_json(r, a.witness);
            }
            ax[to_string(a.axiom)] = std::move(entry);
        }
        out["axioms"] = std::move(ax);
    }
    if (r.bottlenecks) {
        json seq = json::array();
        for (const auto& b : *r.bottlenecks) {
            seq.push_back({{"agents", name_list(r.agents, b.agents)},
                           {"objects", name_list(r.objects, b.objects)},
                           {"welfare", rational_to_json(b.welfare)}});
        }
        out["bottlenecks"] = std::move(seq);
    }
    if (r.trace) out["trace"] = *r.trace;
    return out;
}

RunReport report_from_json(const json& j) {
    try {
        RunReport r;
        r.command = j.at("command").get<std::string>();
        r.agents = string_list(j.at("agents"));
        r.objects = string_list(j.at("objects"));
        r.assignment = Assignment(shares_from_json(r.agents, r.objects, j.at("assignment")));
        if (j.contains("policy")) r.policy = j.at("policy").get<std::string>();
        if (j.contains("steps")) r.steps = j.at("steps").get<std::size_t>();
        if (j.contains("axioms")) {
            // keys come back sorted; restore a canonical order
            for (const auto& [name, entry] : j.at("axioms").items()) {
                const auto a = axiom_from_name(name);
                if (!a) throw ParseError("unknown axiom \"" + name + "\"");
                AxiomReport rep{*a, entry.at("holds").get<bool>(), {}, ""};
                if (!rep.holds) {
                    rep.detail = entry.value("detail", "");
                    rep.witness = witness_from_json(r, entry.at("witness"));
                }
                r.axioms.push_back(std::move(rep));
            }
            std::sort(r.axioms.begin(), r.axioms.end(),
                      [](const AxiomReport& x, const AxiomReport& y) { return x.axiom < y.axiom; });
        }
        if (j.contains("bottlenecks")) {
            BottleneckSequence seq;
            for (const auto& b : j.at("bottlenecks")) {
                seq.push_back(Bottleneck{index_list(r.agents, b.at("agents")), index_list(r.objects, b.at("objects")),
                                         rational_from_json(b.at("welfare"))});
            }
            r.bottlenecks = std::move(seq);
        }
        if (j.contains("trace")) r.trace = j.at("trace");
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

std::string render_json(const RunReport& report) { return report_to_json(report).dump(2) + "\n"; }

std::string render_table(const RunReport& r) {
    std::ostringstream out;
    out << "command: " << r.command;
    if (r.policy) out << "  policy: " << *r.policy;
    if (r.steps) out << "  steps: " << *r.steps;
    out << "\n\n";

    std::vector<std::vector<std::string>> rows;
    rows.push_back({"agent"});
    for (const auto& o : r.objects) rows.back().push_back(o);
    for (AgentId i = 0; i < r.agents.size(); ++i) {
        rows.push_back({r.agents[i]});
        for (ObjectId o = 0; o < r.objects.size(); ++o) {
            const auto& v = r.assignment(i, o);
            rows.back().push_back(v.is_zero() ? "." : v.str());
        }
    }
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (const auto& row : rows) {
        for (std::size_t c = 0; c + 1 < row.size(); ++c) {
            out << std::left << std::setw(static_cast<int>(width[c])) << row[c] << "  ";
        }
        out << row.back();
        out << "\n";
    }

    if (r.bottlenecks) {
        out << "\nbottlenecks:\n";
        for (const auto& b : *r.bottlenecks) {
            out << "  {";
            for (std::size_t k = 0; k < b.agents.size(); ++k) out << (k ? "," : "") << r.agents[b.agents[k]];
            out << "} -> {";
            for (std::size_t k = 0; k < b.objects.size(); ++k) out << (k ? "," : "") << r.objects[b.objects[k]];
            out << "}  welfare " << b.welfare << "\n";
        }
    }
    if (!r.axioms.empty()) {
        out << "\naxioms:\n";
        for (const auto& a : r.axioms) {
            out << "  " << std::left << std::setw(18) << to_string(a.axiom) << (a.holds ? "holds" : "FAILS");
            if (!a.holds) out << "  (" << a.detail << ")";
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace fttc
