#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ltr {

// Dense row-major matrix of doubles; the universal numeric carrier for
// sentence matrices, weights and gradients.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
    std::span<double> row(std::size_t r) { return {row_ptr(r), cols_}; }
    std::span<const double> row(std::size_t r) const { return {row_ptr(r), cols_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    void fill(double v);
    bool all_finite() const;
    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Standard matrix product; throws std::invalid_argument naming both shapes
// when a.cols != b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);

}  // namespace ltr
