#include "ltr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ltr/kernels.hpp"

namespace ltr {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        std::copy(row.begin(), row.end(), m.row_ptr(r++));
    }
    return m;
}

void Matrix::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument(
                "matmul: dimension mismatch (" + std::to_string(a.rows()) + "x" +
                std::to_string(a.cols()) + ") * (" + std::to_string(b.rows()) + "x" +
                std::to_string(b.cols()) + ")");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* out_row = out.row_ptr(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            kernels::axpy(a(i, k), b.row_ptr(k), out_row, b.cols());
        }
    }
    return out;
}

}  // namespace ltr
