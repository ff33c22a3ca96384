#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fttc/axioms.hpp"
#include "fttc/engine.hpp"
#include "fttc/house.hpp"

namespace fttc {

/// Output of one CLI command.
struct RunReport {
    std::string command;
    std::optional<std::string> policy;
    std::optional<std::size_t> steps;
    std::vector<std::string> agents;
    std::vector<std::string> objects;  // columns of `assignment`
    Assignment assignment;
    std::vector<AxiomReport> axioms;
    std::optional<BottleneckSequence> bottlenecks;  // indices into agents / objects
    std::optional<nlohmann::json> trace;

    friend bool operator==(const RunReport&, const RunReport&) = default;
};

[[nodiscard]] nlohmann::json trace_to_json(const Problem& problem, const Trace& trace);

[[nodiscard]] nlohmann::json report_to_json(const RunReport& report);
/// Inverse of report_to_json. Throws ParseError.
[[nodiscard]] RunReport report_from_json(const nlohmann::json& j);

/// Pretty JSON text with a trailing newline; keys sorted.
[[nodiscard]] std::string render_json(const RunReport& report);
/// Human-readable table of the assignment, bottlenecks and verdicts.
[[nodiscard]] std::string render_table(const RunReport& report);

}  // namespace fttc
