#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ltr/matrix.hpp"
#include "ltr/rng.hpp"

namespace ltr {

// Wide (full) 1-D convolution over the rows of S with a filter spanning the
// whole embedding width. S is conceptually zero-padded with m-1 rows above
// and below, so the output has N+m-1 entries:
//
//   v[i] = sum(filter ⊙ padded_window_i) + bias,  i = 0..N+m-2
//
// Throws std::invalid_argument when filter.cols != S.cols.
std::vector<double> conv1d_wide(const Matrix& S, const Matrix& filter, double bias);

// Accumulates gradients for conv1d_wide. d_out is the upstream gradient of
// length N+m-1; d_filter and d_bias are accumulated (+=); d_input, when
// non-null, receives the gradient w.r.t. S (also accumulated).
void conv1d_wide_backward(const Matrix& S, const Matrix& filter,
                          std::span<const double> d_out, Matrix& d_filter,
                          double& d_bias, Matrix* d_input = nullptr);

std::vector<double> relu(std::span<const double> v);

// dx[i] = x[i] > 0 ? dy[i] : 0 (subgradient convention relu'(0) = 0)
std::vector<double> relu_backward(std::span<const double> x,
                                  std::span<const double> dy);

struct MaxPoolResult {
    double value;
    std::size_t index;  // argmax, lowest index on ties
};

// Maximum entry of v. Applied after relu this is the infinity norm of the
// activated feature map. Throws on empty input.
MaxPoolResult max_pool(std::span<const double> v);

// Inverted dropout: in train mode each entry is zeroed with probability p
// and survivors are scaled by 1/(1-p); in eval mode the identity. When
// mask_out is non-null it receives the per-entry scale factors (all ones in
// eval mode), which is exactly the backward multiplier. p must be in [0,1).
std::vector<double> dropout(std::span<const double> v, double p, Rng& rng,
                            bool train, std::vector<double>* mask_out = nullptr);

}  // namespace ltr
