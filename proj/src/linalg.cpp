#include "fttc/linalg.hpp"

#include <utility>

namespace fttc {

std::optional<std::vector<Rational>> solve_square(Matrix a, std::vector<Rational> b) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col).is_zero()) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(b[pivot], b[col]);
        }
        const Rational inv = Rational(1) / a(col, col);
        for (std::size_t c = col; c < n; ++c) a(col, c) *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col).is_zero()) continue;
            const Rational f = a(r, col);
            for (std::size_t c = col; c < n; ++c) {
                if (!a(col, c).is_zero()) a(r, c) -= f * a(col, c);
            }
            b[r] -= f * b[col];
        }
    }
    return b;
}

}  // namespace fttc
