#include "fttc/problem_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "fttc/errors.hpp"

namespace fttc {

using nlohmann::json;

Rational rational_from_json(const json& j) {
    if (j.is_number_integer() || j.is_number_unsigned()) {
        return Rational(j.get<long>());
    }
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }
    throw ParseError("expected a rational (\"num/den\" string or integer), got " + j.dump());
}

json rational_to_json(const Rational& r) {
    if (r.is_integer()) {
        // Values in this format are shares and quotas; they fit in a long.
        return json(std::stol(r.str()));
    }
    return json(r.str());
}

namespace {

std::vector<std::string> read_names(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ParseError(std::string("missing array \"") + key + "\"");
    }
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) throw ParseError(std::string("non-string entry in \"") + key + "\"");
        auto name = v.get<std::string>();
        if (!seen.insert(name).second) throw ParseError("duplicate name \"" + name + "\"");
        names.push_back(std::move(name));
    }
    return names;
}

}  // namespace

Problem problem_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("problem must be a JSON object");
    Problem p;
    p.agents = read_names(j, "agents");
    p.objects = read_names(j, "objects");
    p.endowments = Matrix(p.agents.size(), p.objects.size());

    auto agent_of = [&](const std::string& name) {
        auto a = p.find_agent(name);
        if (!a) throw ParseError("unknown agent \"" + name + "\"");
        return *a;
    };
    auto object_of = [&](const std::string& name) {
        auto o = p.find_object(name);
        if (!o) throw ParseError("unknown object \"" + name + "\"");
        return *o;
    };

    if (j.contains("endowments")) {
        const auto& e = j.at("endowments");
        if (!e.is_object()) throw ParseError("\"endowments\" must be an object");
        for (const auto& [agent, row] : e.items()) {
            const AgentId i = agent_of(agent);
            if (!row.is_object()) throw ParseError("endowment row for \"" + agent + "\" must be an object");
            for (const auto& [object, value] : row.items()) {
                p.endowments(i, object_of(object)) = rational_from_json(value);
            }
        }
    }

    if (!j.contains("preferences") || !j.at("preferences").is_object()) {
        throw ParseError("missing object \"preferences\"");
    }
    const auto& prefs = j.at("preferences");
    p.preferences.resize(p.agents.size());
    std::vector<bool> have(p.agents.size(), false);
    for (const auto& [agent, classes_json] : prefs.items()) {
        const AgentId i = agent_of(agent);
        if (!classes_json.is_array()) throw ParseError("preference of \"" + agent + "\" must be an array");
        std::vector<std::vector<ObjectId>> classes;
        for (const auto& cls : classes_json) {
            if (!cls.is_array()) throw ParseError("preference class of \"" + agent + "\" must be an array");
            std::vector<ObjectId> ids;
            for (const auto& name : cls) {
                if (!name.is_string()) throw ParseError("object names must be strings");
                ids.push_back(object_of(name.get<std::string>()));
            }
            classes.push_back(std::move(ids));
        }
        try {
            p.preferences[i] = WeakPreference(std::move(classes), p.objects.size());
        } catch (const InvalidInput& e) {
            throw ParseError("preference of \"" + agent + "\": " + e.what());
        }
        have[i] = true;
    }
    for (AgentId i = 0; i < p.agents.size(); ++i) {
        if (!have[i]) throw ParseError("missing preference for agent \"" + p.agents[i] + "\"");
    }
    return p;
}

Problem parse_problem(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return problem_from_json(j);
}

json problem_to_json(const Problem& problem) {
    json j;
    j["agents"] = problem.agents;
    j["objects"] = problem.objects;
    json endowments = json::object();
    for (AgentId i = 0; i < problem.num_agents(); ++i) {
        json row = json::object();
        for (ObjectId o = 0; o < problem.num_objects(); ++o) {
            const auto& w = problem.endowments(i, o);
            if (!w.is_zero()) row[problem.objects[o]] = rational_to_json(w);
        }
        if (!row.empty()) endowments[problem.agents[i]] = std::move(row);
    }
    j["endowments"] = std::move(endowments);
    json prefs = json::object();
    for (AgentId i = 0; i < problem.num_agents(); ++i) {
        json classes = json::array();
        for (const auto& cls : problem.preferences[i].classes()) {
            json names = json::array();
            for (ObjectId o : cls) names.push_back(problem.objects[o]);
            classes.push_back(std::move(names));
        }
        prefs[problem.agents[i]] = std::move(classes);
    }
    j["preferences"] = std::move(prefs);
    return j;
}

std::string serialize_problem(const Problem& problem) { return problem_to_json(problem).dump(2) + "\n"; }

json shares_to_json(const std::vector<std::string>& agents, const std::vector<std::string>& objects,
                    const Matrix& m) {
    json out = json::object();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::object();
        for (std::size_t o = 0; o < m.cols(); ++o) {
            if (!m(i, o).is_zero()) row[objects[o]] = rational_to_json(m(i, o));
        }
        out[agents[i]] = std::move(row);
    }
    return out;
}

Matrix shares_from_json(const std::vector<std::string>& agents, const std::vector<std::string>& objects,
                        const json& j) {
    if (!j.is_object()) throw ParseError("share table must be a JSON object");
    auto index = [](const std::vector<std::string>& names, const std::string& name, const char* what) {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) throw ParseError(std::string("unknown ") + what + " \"" + name + "\"");
        return static_cast<std::size_t>(it - names.begin());
    };
    Matrix m(agents.size(), objects.size());
    for (const auto& [agent, row] : j.items()) {
        const std::size_t i = index(agents, agent, "agent");
        if (!row.is_object()) throw ParseError("share row must be an object");
        for (const auto& [object, value] : row.items()) m(i, index(objects, object, "object")) = rational_from_json(value);
    }
    return m;
}

json assignment_to_json(const Problem& problem, const Assignment& p) {
    return shares_to_json(problem.agents, problem.objects, p.shares);
}

Assignment assignment_from_json(const Problem& problem, const json& j) {
    return Assignment(shares_from_json(problem.agents, problem.objects, j));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fttc
