#pragma once

#include <optional>
#include <vector>

#include "fttc/matrix.hpp"

namespace fttc {

/// Solves a x = b for square `a` by exact Gauss-Jordan elimination.
/// Returns nullopt when `a` is singular.
[[nodiscard]] std::optional<std::vector<Rational>> solve_square(Matrix a, std::vector<Rational> b);

}  // namespace fttc
