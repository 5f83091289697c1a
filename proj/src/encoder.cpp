#include "ltr/encoder.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ltr/kernels.hpp"
#include "ltr/layers.hpp"

namespace ltr::encoder {

namespace {

std::atomic<std::uint64_t> g_encode_calls{0};

std::string weight_name(std::size_t size, std::size_t copy) {
    return "conv" + std::to_string(size) + "." + std::to_string(copy) + ".weight";
}

std::string bias_name(std::size_t size, std::size_t copy) {
    return "conv" + std::to_string(size) + "." + std::to_string(copy) + ".bias";
}

}  // namespace

std::size_t EncoderConfig::feature_dim() const {
    std::size_t f = 0;
    for (const auto& spec : filters) f += spec.copies;
    return f;
}

EncoderModel init_encoder(const EncoderConfig& config, std::uint64_t seed) {
    if (config.embedding_dim == 0) {
        throw std::invalid_argument("init_encoder: embedding_dim must be >= 1");
    }
    if (config.filters.empty()) {
        throw std::invalid_argument("init_encoder: at least one filter spec required");
    }
    for (const auto& spec : config.filters) {
        if (spec.size < 1 || spec.copies < 1) {
            throw std::invalid_argument("init_encoder: filter sizes and copies must be >= 1");
        }
    }
    if (config.dropout_p < 0.0 || config.dropout_p >= 1.0) {
        throw std::invalid_argument("init_encoder: dropout_p must be in [0,1)");
    }

    EncoderModel model;
    model.config = config;
    Rng rng(seed);
    for (const auto& spec : config.filters) {
        const double fan_in = static_cast<double>(spec.size * config.embedding_dim);
        const double limit = std::sqrt(6.0 / (fan_in + 1.0));
        for (std::size_t c = 0; c < spec.copies; ++c) {
            Matrix w(spec.size, config.embedding_dim);
            for (std::size_t i = 0; i < w.size(); ++i) {
                w.data()[i] = rng.uniform(-limit, limit);
            }
            model.params.add(weight_name(spec.size, c), std::move(w));
            model.params.add(bias_name(spec.size, c), Matrix(1, 1));
        }
    }
    return model;
}

std::vector<double> encode(const embeddings::SentenceMatrix& sentence,
                           const EncoderModel& model, bool train, Rng* rng,
                           EncodeTrace* trace) {
    const Matrix& S = sentence.matrix;
    if (S.cols() != model.config.embedding_dim) {
        throw std::invalid_argument(
                "encode: sentence matrix width " + std::to_string(S.cols()) +
                " does not match encoder embedding " +
                std::to_string(model.config.embedding_dim));
    }
    g_encode_calls.fetch_add(1, std::memory_order_relaxed);

    const std::size_t feature_dim = model.config.feature_dim();
    std::vector<double> pooled;
    pooled.reserve(feature_dim);
    if (trace) {
        *trace = EncodeTrace{};
        trace->input = S;
        trace->conv.reserve(feature_dim);
        trace->argmax.reserve(feature_dim);
    }

    for (const auto& spec : model.config.filters) {
        for (std::size_t c = 0; c < spec.copies; ++c) {
            const Matrix& w = model.params.at(weight_name(spec.size, c)).value;
            const double b = model.params.at(bias_name(spec.size, c)).value(0, 0);
            auto v = conv1d_wide(S, w, b);
            const auto activated = relu(v);
            const auto mp = max_pool(activated);
            pooled.push_back(mp.value);
            if (trace) {
                trace->conv.push_back(std::move(v));
                trace->argmax.push_back(mp.index);
            }
        }
    }

    const bool use_dropout = train && model.config.dropout_p > 0.0;
    if (use_dropout && !rng) {
        throw std::invalid_argument("encode: train-mode dropout requires an rng");
    }
    std::vector<double> mask;
    std::vector<double> out = use_dropout
            ? dropout(pooled, model.config.dropout_p, *rng, true, &mask)
            : pooled;
    if (trace) {
        trace->pooled = std::move(pooled);
        trace->mask = use_dropout ? std::move(mask)
                                  : std::vector<double>(out.size(), 1.0);
        trace->valid = true;
    }
    return out;
}

void encode_backward(const EncodeTrace& trace, std::span<const double> d_out,
                     EncoderModel& model) {
    if (!trace.valid) {
        throw std::logic_error("encode_backward: no recorded forward pass");
    }
    if (d_out.size() != trace.pooled.size()) {
        throw std::invalid_argument("encode_backward: gradient length mismatch");
    }

    std::size_t flat = 0;
    for (const auto& spec : model.config.filters) {
        for (std::size_t c = 0; c < spec.copies; ++c, ++flat) {
            const double g = d_out[flat] * trace.mask[flat];
            if (g == 0.0) continue;
            const auto& v = trace.conv[flat];
            const std::size_t peak = trace.argmax[flat];
            // max_pool routes the gradient to the argmax; relu' gates it
            if (v[peak] <= 0.0) continue;
            std::vector<double> dv(v.size(), 0.0);
            dv[peak] = g;
            auto& w_slot = model.params.at(weight_name(spec.size, c));
            auto& b_slot = model.params.at(bias_name(spec.size, c));
            double db = 0.0;
            conv1d_wide_backward(trace.input, w_slot.value, dv, w_slot.grad, db);
            b_slot.grad(0, 0) += db;
        }
    }
}

std::vector<double> join_phi(std::span<const double> v_q,
                             std::span<const double> v_d) {
    if (v_q.size() != v_d.size()) {
        throw std::invalid_argument("join_phi: length mismatch (" +
                                    std::to_string(v_q.size()) + " vs " +
                                    std::to_string(v_d.size()) + ")");
    }
    std::vector<double> phi(v_q.size());
    kernels::sq_diff(v_q.data(), v_d.data(), phi.data(), phi.size());
    return phi;
}

void join_phi_backward(std::span<const double> a, std::span<const double> b,
                       std::span<const double> d_phi, std::span<double> d_a,
                       std::span<double> d_b) {
    if (a.size() != b.size() || a.size() != d_phi.size() ||
        a.size() != d_a.size() || a.size() != d_b.size()) {
        throw std::invalid_argument("join_phi_backward: length mismatch");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double g = 2.0 * d_phi[i] * (a[i] - b[i]);
        d_a[i] += g;
        d_b[i] -= g;
    }
}

std::uint64_t encode_call_count() {
    return g_encode_calls.load(std::memory_order_relaxed);
}

void reset_encode_call_count() {
    g_encode_calls.store(0, std::memory_order_relaxed);
}

}  // namespace ltr::encoder
