#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fttc/rational.hpp"

namespace fttc::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Constraint {
    std::vector<std::pair<std::size_t, Rational>> terms;
    Sense sense = Sense::LessEqual;
    Rational rhs;
};

/// maximize objective . x  subject to constraints, x >= 0.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<Rational> objective;
    std::vector<Constraint> constraints;

    explicit LinearProgram(std::size_t n) : num_vars(n), objective(n) {}

    void add(std::vector<std::pair<std::size_t, Rational>> terms, Sense sense, Rational rhs) {
        constraints.push_back({std::move(terms), sense, std::move(rhs)});
    }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    Rational value;
    std::vector<Rational> x;
};

/// Two-phase tableau simplex over exact rationals with Bland's rule, so it
/// cannot cycle. Returns a basic optimal solution.
[[nodiscard]] Result solve(const LinearProgram& program);

}  // namespace fttc::lp
