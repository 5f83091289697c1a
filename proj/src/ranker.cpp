#include "ltr/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ltr/kernels.hpp"
#include "ltr/layers.hpp"
#include "ltr/ordering.hpp"

namespace ltr::ranker {

int preference(int rel_i, int rel_j) {
    if (!data::valid_grade(rel_i) || !data::valid_grade(rel_j)) {
        throw std::invalid_argument("preference: invalid relevance grade " +
                                    std::to_string(data::valid_grade(rel_i) ? rel_j : rel_i));
    }
    if (rel_i > rel_j) return 1;
    if (rel_i < rel_j) return -1;
    return 0;
}

double target_probability(int pref) { return (1.0 + pref) / 2.0; }

double posterior(double s_ij) {
    if (s_ij >= 0.0) {
        return 1.0 / (1.0 + std::exp(-s_ij));
    }
    const double e = std::exp(s_ij);
    return e / (1.0 + e);
}

double ranknet_loss(double s_ij, double target) {
    // -t*s + log(1 + exp(s)), branched so the exponent is never positive.
    if (s_ij > 0.0) {
        return (1.0 - target) * s_ij + std::log1p(std::exp(-s_ij));
    }
    return -target * s_ij + std::log1p(std::exp(s_ij));
}

double ranknet_loss_grad(double s_ij, double target) {
    return posterior(s_ij) - target;
}

std::vector<Triple> make_pairs_from_grades(std::span<const int> grades,
                                           std::size_t group_index) {
    std::vector<Triple> out;
    const std::size_t n = grades.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int p = preference(grades[i], grades[j]);
            if (p > 0) {
                out.push_back({group_index, i, j, 1.0});
            } else if (p < 0) {
                out.push_back({group_index, j, i, 1.0});
            }
        }
    }
    return out;
}

std::vector<Triple> make_pairs(const data::FeatureGroup& group, std::size_t group_index) {
    std::vector<int> grades;
    grades.reserve(group.docs.size());
    for (const auto& d : group.docs) grades.push_back(d.grade);
    return make_pairs_from_grades(grades, group_index);
}

std::vector<Triple> make_pairs(const data::TextGroup& group, std::size_t group_index) {
    std::vector<int> grades;
    grades.reserve(group.docs.size());
    for (const auto& d : group.docs) grades.push_back(d.grade);
    return make_pairs_from_grades(grades, group_index);
}

RankNetModel init_ranknet(const RankNetConfig& config, std::uint64_t seed) {
    if (config.input_dim == 0 || config.hidden == 0) {
        throw std::invalid_argument("init_ranknet: input_dim and hidden must be positive");
    }
    RankNetModel model;
    model.config = config;
    Rng rng(seed);

    Matrix w1(config.hidden, config.input_dim);
    const double lim1 = std::sqrt(6.0 / double(config.input_dim + config.hidden));
    for (std::size_t i = 0; i < w1.size(); ++i) w1.data()[i] = rng.uniform(-lim1, lim1);
    model.params.add("fc1.weight", std::move(w1));
    model.params.add("fc1.bias", Matrix(config.hidden, 1));

    Matrix w2(1, config.hidden);
    const double lim2 = std::sqrt(6.0 / double(config.hidden + 1));
    for (std::size_t i = 0; i < w2.size(); ++i) w2.data()[i] = rng.uniform(-lim2, lim2);
    model.params.add("fc2.weight", std::move(w2));
    model.params.add("fc2.bias", Matrix(1, 1));
    return model;
}

double score(const RankNetModel& model, std::span<const double> features,
             ScoreTrace* trace) {
    const auto& cfg = model.config;
    if (features.size() != cfg.input_dim) {
        throw std::invalid_argument("score: expected " + std::to_string(cfg.input_dim) +
                                    " features, got " + std::to_string(features.size()));
    }
    const Matrix& w1 = model.params.at("fc1.weight").value;
    const Matrix& b1 = model.params.at("fc1.bias").value;
    const Matrix& w2 = model.params.at("fc2.weight").value;
    const Matrix& b2 = model.params.at("fc2.bias").value;

    std::vector<double> pre(cfg.hidden);
    for (std::size_t r = 0; r < cfg.hidden; ++r) {
        pre[r] = kernels::dot(w1.row_ptr(r), features.data(), cfg.input_dim) + b1.data()[r];
    }
    std::vector<double> hidden = relu(pre);
    const double s = kernels::dot(w2.row_ptr(0), hidden.data(), cfg.hidden) + b2.data()[0];

    if (trace != nullptr) {
        trace->input.assign(features.begin(), features.end());
        trace->pre_hidden = std::move(pre);
        trace->hidden = std::move(hidden);
        trace->valid = true;
    }
    return s;
}

std::vector<double> score_backward(const ScoreTrace& trace, double d_score,
                                   RankNetModel& model) {
    if (!trace.valid) {
        throw std::logic_error("score_backward: trace has no recorded forward pass");
    }
    const auto& cfg = model.config;
    const Matrix& w1 = model.params.at("fc1.weight").value;
    const Matrix& w2 = model.params.at("fc2.weight").value;
    Matrix& d_w1 = model.params.at("fc1.weight").grad;
    Matrix& d_b1 = model.params.at("fc1.bias").grad;
    Matrix& d_w2 = model.params.at("fc2.weight").grad;
    Matrix& d_b2 = model.params.at("fc2.bias").grad;

    // s = w2 . hidden + b2
    kernels::axpy(d_score, trace.hidden.data(), d_w2.row_ptr(0), cfg.hidden);
    d_b2.data()[0] += d_score;

    // hidden = relu(pre), pre_r = w1[r] . x + b1[r]
    std::vector<double> d_input(cfg.input_dim, 0.0);
    for (std::size_t r = 0; r < cfg.hidden; ++r) {
        if (trace.pre_hidden[r] <= 0.0) continue;
        const double g = d_score * w2.data()[r];
        if (g == 0.0) continue;
        kernels::axpy(g, trace.input.data(), d_w1.row_ptr(r), cfg.input_dim);
        d_b1.data()[r] += g;
        kernels::axpy(g, w1.row_ptr(r), d_input.data(), cfg.input_dim);
    }
    return d_input;
}

ConvRankNetModel init_convranknet(const encoder::EncoderConfig& enc_config,
                                  std::size_t hidden, std::uint64_t seed) {
    ConvRankNetModel model;
    Rng rng(seed);
    model.enc = encoder::init_encoder(enc_config, rng.split(1).seed());
    model.net = init_ranknet({enc_config.feature_dim(), hidden}, rng.split(2).seed());
    return model;
}

double score_conv(const ConvRankNetModel& model, std::span<const double> v_q,
                  std::span<const double> v_d) {
    const std::vector<double> phi = encoder::join_phi(v_q, v_d);
    return score(model.net, phi, nullptr);
}

ConvTripleForward conv_triple_forward(const ConvRankNetModel& model,
                                      const embeddings::SentenceMatrix& query,
                                      const embeddings::SentenceMatrix& doc_i,
                                      const embeddings::SentenceMatrix& doc_j,
                                      double target, bool train, Rng* rng) {
    ConvTripleForward fwd;
    fwd.target = target;
    fwd.v_q = encoder::encode(query, model.enc, train, rng, &fwd.trace_q);
    fwd.v_i = encoder::encode(doc_i, model.enc, train, rng, &fwd.trace_i);
    fwd.v_j = encoder::encode(doc_j, model.enc, train, rng, &fwd.trace_j);
    fwd.phi_i = encoder::join_phi(fwd.v_q, fwd.v_i);
    fwd.phi_j = encoder::join_phi(fwd.v_q, fwd.v_j);
    fwd.s_i = score(model.net, fwd.phi_i, &fwd.score_i);
    fwd.s_j = score(model.net, fwd.phi_j, &fwd.score_j);
    fwd.s_ij = fwd.s_i - fwd.s_j;
    fwd.loss = ranknet_loss(fwd.s_ij, target);
    fwd.valid = true;
    return fwd;
}

void conv_triple_backward(const ConvTripleForward& fwd, double d_loss,
                          ConvRankNetModel& model) {
    if (!fwd.valid) {
        throw std::logic_error("conv_triple_backward: forward pass not recorded");
    }
    const double g = d_loss * ranknet_loss_grad(fwd.s_ij, fwd.target);

    const std::vector<double> d_phi_i = score_backward(fwd.score_i, g, model.net);
    const std::vector<double> d_phi_j = score_backward(fwd.score_j, -g, model.net);

    std::vector<double> d_vq(fwd.v_q.size(), 0.0);
    std::vector<double> d_vi(fwd.v_i.size(), 0.0);
    std::vector<double> d_vj(fwd.v_j.size(), 0.0);
    encoder::join_phi_backward(fwd.v_q, fwd.v_i, d_phi_i, d_vq, d_vi);
    encoder::join_phi_backward(fwd.v_q, fwd.v_j, d_phi_j, d_vq, d_vj);

    encoder::encode_backward(fwd.trace_q, d_vq, model.enc);
    encoder::encode_backward(fwd.trace_i, d_vi, model.enc);
    encoder::encode_backward(fwd.trace_j, d_vj, model.enc);
}

namespace {

void check_finite_loss(double loss, std::size_t epoch, std::size_t batch) {
    if (!std::isfinite(loss)) {
        throw std::runtime_error("train: non-finite loss at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(batch));
    }
}

}  // namespace

TrainResult train_ranknet(RankNetModel& model,
                          const std::vector<data::FeatureGroup>& groups,
                          const std::vector<Triple>& triples,
                          const TrainConfig& config) {
    if (triples.empty()) {
        throw std::invalid_argument("train_ranknet: no training pairs");
    }
    if (config.batch_size == 0) {
        throw std::invalid_argument("train_ranknet: batch_size must be positive");
    }
    for (const Triple& t : triples) {
        if (t.query >= groups.size() || t.doc_i >= groups[t.query].docs.size() ||
            t.doc_j >= groups[t.query].docs.size()) {
            throw std::out_of_range("train_ranknet: triple indexes outside groups");
        }
    }

    Rng shuffle_rng = Rng(config.seed).split(0x51);
    std::vector<std::size_t> order(triples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    result.epoch_mean_loss.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            const double inv = 1.0 / double(end - start);
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const Triple& t = triples[order[k]];
                const auto& docs = groups[t.query].docs;
                ScoreTrace trace_i, trace_j;
                const double s_i = score(model, docs[t.doc_i].features, &trace_i);
                const double s_j = score(model, docs[t.doc_j].features, &trace_j);
                const double s_ij = s_i - s_j;
                batch_loss += ranknet_loss(s_ij, t.target);
                const double g = inv * ranknet_loss_grad(s_ij, t.target);
                score_backward(trace_i, g, model);
                score_backward(trace_j, -g, model);
            }
            check_finite_loss(batch_loss, epoch, batch_index);
            model.params.sgd_step(config.lr);
            epoch_loss += batch_loss;
            ++batch_index;
        }
        result.epoch_mean_loss.push_back(epoch_loss / double(triples.size()));
    }
    return result;
}

ConvTrainingSet build_conv_training_set(const std::vector<data::TextGroup>& groups,
                                        const embeddings::EmbeddingTable& table,
                                        std::size_t trunc_len) {
    ConvTrainingSet set;
    for (const data::TextGroup& group : groups) {
        const std::size_t query_idx = set.sentences.size();
        set.sentences.push_back(embeddings::to_sentence_matrix(group.query_text, table, trunc_len));
        std::vector<std::size_t> doc_idx;
        doc_idx.reserve(group.docs.size());
        for (const auto& doc : group.docs) {
            doc_idx.push_back(set.sentences.size());
            set.sentences.push_back(embeddings::to_sentence_matrix(doc.text, table, trunc_len));
        }
        for (const Triple& pair : make_pairs(group)) {
            set.triples.push_back(
                {query_idx, doc_idx[pair.doc_i], doc_idx[pair.doc_j], pair.target});
        }
    }
    return set;
}

TrainResult train_convranknet(ConvRankNetModel& model, const ConvTrainingSet& set,
                              const TrainConfig& config) {
    if (set.triples.empty()) {
        throw std::invalid_argument("train_convranknet: no training pairs");
    }
    if (config.batch_size == 0) {
        throw std::invalid_argument("train_convranknet: batch_size must be positive");
    }
    for (const Triple& t : set.triples) {
        if (t.query >= set.sentences.size() || t.doc_i >= set.sentences.size() ||
            t.doc_j >= set.sentences.size()) {
            throw std::out_of_range("train_convranknet: triple indexes outside sentence list");
        }
    }

    Rng shuffle_rng = Rng(config.seed).split(0x51);
    Rng dropout_rng = Rng(config.seed).split(0xd0);
    const bool train_mode = model.enc.config.dropout_p > 0.0;
    std::vector<std::size_t> order(set.triples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    result.epoch_mean_loss.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            const double inv = 1.0 / double(end - start);
            double batch_loss = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                const Triple& t = set.triples[order[k]];
                ConvTripleForward fwd = conv_triple_forward(
                    model, set.sentences[t.query], set.sentences[t.doc_i],
                    set.sentences[t.doc_j], t.target, train_mode, &dropout_rng);
                batch_loss += fwd.loss;
                conv_triple_backward(fwd, inv, model);
            }
            check_finite_loss(batch_loss, epoch, batch_index);
            model.enc.params.sgd_step(config.lr);
            model.net.params.sgd_step(config.lr);
            epoch_loss += batch_loss;
            ++batch_index;
        }
        result.epoch_mean_loss.push_back(epoch_loss / double(set.triples.size()));
    }
    return result;
}

std::vector<RankedDoc> rank_documents(const ConvRankNetModel& model,
                                      const embeddings::SentenceMatrix& query,
                                      const std::vector<embeddings::SentenceMatrix>& docs) {
    const std::vector<double> v_q = encoder::encode(query, model.enc);
    std::vector<double> scores(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::vector<double> v_d = encoder::encode(docs[i], model.enc);
        scores[i] = score_conv(model, v_q, v_d);
    }
    std::vector<RankedDoc> ranked;
    ranked.reserve(docs.size());
    for (std::size_t index : ordering::rank_by_score(scores)) {
        ranked.push_back({index, scores[index]});
    }
    return ranked;
}

}  // namespace ltr::ranker
