#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fttc/model.hpp"

namespace fttc {

/// Problem file format:
///
///   { "agents": [names], "objects": [names],
///     "endowments": { agent: { object: "num/den" | integer } },
///     "preferences": { agent: [[best class], [next class], ...] } }
///
/// Omitted endowment entries are zero. Throws ParseError.
[[nodiscard]] Problem parse_problem(std::string_view text);
[[nodiscard]] Problem problem_from_json(const nlohmann::json& j);

/// Canonical text: zero entries omitted, integers bare, fractions as strings,
/// stable key order.
[[nodiscard]] std::string serialize_problem(const Problem& problem);
[[nodiscard]] nlohmann::json problem_to_json(const Problem& problem);

/// Rational <-> JSON scalar ("n/d" string or bare integer).
[[nodiscard]] nlohmann::json rational_to_json(const Rational& r);
[[nodiscard]] Rational rational_from_json(const nlohmann::json& j);

/// { agent: { object: share } } with zero entries omitted.
[[nodiscard]] nlohmann::json shares_to_json(const std::vector<std::string>& agents,
                                            const std::vector<std::string>& objects, const Matrix& m);
[[nodiscard]] Matrix shares_from_json(const std::vector<std::string>& agents, const std::vector<std::string>& objects,
                                      const nlohmann::json& j);
[[nodiscard]] nlohmann::json assignment_to_json(const Problem& problem, const Assignment& p);
[[nodiscard]] Assignment assignment_from_json(const Problem& problem, const nlohmann::json& j);

[[nodiscard]] std::string read_file(const std::string& path);

}  // namespace fttc
