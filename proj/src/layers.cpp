#include "ltr/layers.hpp"

#include <stdexcept>
#include <string>

#include "ltr/kernels.hpp"

namespace ltr {

namespace {

void check_conv_shapes(const Matrix& S, const Matrix& filter) {
    if (filter.rows() == 0) {
        throw std::invalid_argument("conv1d_wide: filter must have at least one row");
    }
    if (filter.cols() != S.cols()) {
        throw std::invalid_argument(
                "conv1d_wide: filter width " + std::to_string(filter.cols()) +
                " does not match embedding dimension " + std::to_string(S.cols()));
    }
}

}  // namespace

std::vector<double> conv1d_wide(const Matrix& S, const Matrix& filter, double bias) {
    check_conv_shapes(S, filter);
    const std::size_t n = S.rows();
    const std::size_t m = filter.rows();
    std::vector<double> out(n + m - 1, bias);
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            // padded row i+r maps to S row i+r-(m-1); out of range rows are zero
            const std::size_t j = i + r;
            if (j < m - 1 || j >= m - 1 + n) continue;
            acc += kernels::dot(filter.row_ptr(r), S.row_ptr(j - (m - 1)), S.cols());
        }
        out[i] += acc;
    }
    return out;
}

void conv1d_wide_backward(const Matrix& S, const Matrix& filter,
                          std::span<const double> d_out, Matrix& d_filter,
                          double& d_bias, Matrix* d_input) {
    check_conv_shapes(S, filter);
    const std::size_t n = S.rows();
    const std::size_t m = filter.rows();
    if (d_out.size() != n + m - 1) {
        throw std::invalid_argument("conv1d_wide_backward: upstream gradient length " +
                                    std::to_string(d_out.size()) + ", expected " +
                                    std::to_string(n + m - 1));
    }
    if (!d_filter.same_shape(filter)) {
        throw std::invalid_argument("conv1d_wide_backward: d_filter shape mismatch");
    }
    if (d_input && !d_input->same_shape(S)) {
        throw std::invalid_argument("conv1d_wide_backward: d_input shape mismatch");
    }
    for (std::size_t i = 0; i < d_out.size(); ++i) {
        const double g = d_out[i];
        if (g == 0.0) continue;
        d_bias += g;
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t j = i + r;
            if (j < m - 1 || j >= m - 1 + n) continue;
            const std::size_t s_row = j - (m - 1);
            kernels::axpy(g, S.row_ptr(s_row), d_filter.row_ptr(r), S.cols());
            if (d_input) {
                kernels::axpy(g, filter.row_ptr(r), d_input->row_ptr(s_row), S.cols());
            }
        }
    }
}

std::vector<double> relu(std::span<const double> v) {
    std::vector<double> out(v.size());
    kernels::relu(v.data(), out.data(), v.size());
    return out;
}

std::vector<double> relu_backward(std::span<const double> x,
                                  std::span<const double> dy) {
    if (x.size() != dy.size()) {
        throw std::invalid_argument("relu_backward: length mismatch");
    }
    std::vector<double> dx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
    }
    return dx;
}

MaxPoolResult max_pool(std::span<const double> v) {
    if (v.empty()) {
        throw std::invalid_argument("max_pool: empty input");
    }
    const std::size_t idx = kernels::argmax(v.data(), v.size());
    return {v[idx], idx};
}

std::vector<double> dropout(std::span<const double> v, double p, Rng& rng,
                            bool train, std::vector<double>* mask_out) {
    if (p < 0.0 || p >= 1.0) {
        throw std::invalid_argument("dropout: p must be in [0,1)");
    }
    std::vector<double> out(v.begin(), v.end());
    if (mask_out) mask_out->assign(v.size(), 1.0);
    if (!train || p == 0.0) return out;
    const double scale = 1.0 / (1.0 - p);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double factor = rng.bernoulli(p) ? 0.0 : scale;
        out[i] *= factor;
        if (mask_out) (*mask_out)[i] = factor;
    }
    return out;
}

}  // namespace ltr
