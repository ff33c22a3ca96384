#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "fttc/rational.hpp"

namespace fttc {

/// Dense row-major matrix of exact rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    const Rational& operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const Rational> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    [[nodiscard]] Rational row_sum(std::size_t r) const;
    [[nodiscard]] Rational col_sum(std::size_t c) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

inline Rational Matrix::row_sum(std::size_t r) const {
    Rational s;
    for (const auto& v : row(r)) s += v;
    return s;
}

inline Rational Matrix::col_sum(std::size_t c) const {
    Rational s;
    for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c);
    return s;
}

}  // namespace fttc
