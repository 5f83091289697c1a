#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltr/embeddings.hpp"
#include "ltr/matrix.hpp"
#include "ltr/param_store.hpp"
#include "ltr/rng.hpp"

namespace ltr::encoder {

struct FilterSpec {
    std::size_t size;    // filter rows m (words per window)
    std::size_t copies;  // independent filter copies of this size
};

struct EncoderConfig {
    std::vector<FilterSpec> filters{{3, 10}, {4, 10}, {5, 10}};
    std::size_t embedding_dim = 300;
    double dropout_p = 0.5;

    std::size_t feature_dim() const;
};

// The convolutional sentence encoder. One parameter store backs every
// branch of the Siamese network: the query branch and both document
// branches read the same slots, so weight sharing is structural rather
// than copied.
//
// Slot naming: "conv{size}.{copy}.weight" (size x dim) and
// "conv{size}.{copy}.bias" (1x1). Output ordering is filter-spec order,
// copy index ascending.
struct EncoderModel {
    EncoderConfig config;
    ParamStore params;
};

// Weights ~ uniform Glorot with fan_in = size*dim, fan_out = 1; biases 0.
// Deterministic under seed.
EncoderModel init_encoder(const EncoderConfig& config, std::uint64_t seed);

// Intermediates recorded by a training-mode forward pass, consumed by
// encode_backward.
struct EncodeTrace {
    Matrix input;
    std::vector<std::vector<double>> conv;  // pre-activation map per filter copy
    std::vector<std::size_t> argmax;        // max position after relu, per copy
    std::vector<double> pooled;             // before dropout
    std::vector<double> mask;               // dropout scale factors
    bool valid = false;
};

// conv1d_wide -> relu -> max_pool per filter copy, concatenated; dropout on
// the pooled vector in train mode. rng may be null when train is false or
// dropout_p is 0.
std::vector<double> encode(const embeddings::SentenceMatrix& sentence,
                           const EncoderModel& model, bool train = false,
                           Rng* rng = nullptr, EncodeTrace* trace = nullptr);

// Accumulates parameter gradients for one recorded forward pass. Throws
// std::logic_error if the trace was not produced by encode.
void encode_backward(const EncodeTrace& trace, std::span<const double> d_out,
                     EncoderModel& model);

// Elementwise squared difference (v_q - v_d)^2; the pairwise join vector.
std::vector<double> join_phi(std::span<const double> v_q,
                             std::span<const double> v_d);

// d_phi flowing back through join_phi: d_a += d_phi * 2(a-b), d_b -= the same.
void join_phi_backward(std::span<const double> a, std::span<const double> b,
                       std::span<const double> d_phi, std::span<double> d_a,
                       std::span<double> d_b);

// Process-wide instrumentation: number of encode() calls. Used to verify
// linear-time inference (one forward pass per document).
std::uint64_t encode_call_count();
void reset_encode_call_count();

}  // namespace ltr::encoder
