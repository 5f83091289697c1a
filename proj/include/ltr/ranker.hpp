#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ltr/data.hpp"
#include "ltr/encoder.hpp"
#include "ltr/param_store.hpp"
#include "ltr/rng.hpp"

namespace ltr::ranker {

// Pairwise preference: +1 if rel_i > rel_j, -1 if rel_i < rel_j, 0 on ties.
// Grades must be valid relevance labels.
int preference(int rel_i, int rel_j);

// Deterministic target probability (1 + p) / 2 in {0, 0.5, 1}.
double target_probability(int pref);

// Bradley-Terry posterior P(d_i > d_j) = sigmoid(s_i - s_j), numerically
// stable for any finite score difference.
double posterior(double s_ij);

// Pairwise cross-entropy C_ij = -target * s_ij + log(1 + exp(s_ij)),
// computed in the overflow-free log1p form.
double ranknet_loss(double s_ij, double target);

// dC/ds_ij = sigmoid(s_ij) - target
double ranknet_loss_grad(double s_ij, double target);

// One training pair: indices of the query and two documents, doc_i
// preferred. Feature mode indexes (group, doc-in-group); text mode indexes
// a flat sentence list.
struct Triple {
    std::size_t query;
    std::size_t doc_i;
    std::size_t doc_j;
    double target = 1.0;
};

// All strictly-ordered document pairs of a group, oriented so doc_i has the
// higher grade; ties omitted; ordered by (i, j) document index.
std::vector<Triple> make_pairs(const data::FeatureGroup& group,
                               std::size_t group_index = 0);
std::vector<Triple> make_pairs(const data::TextGroup& group,
                               std::size_t group_index = 0);
std::vector<Triple> make_pairs_from_grades(std::span<const int> grades,
                                           std::size_t group_index = 0);

// The scoring network: input -> hidden (ReLU) -> scalar score.
// Slots: "fc1.weight" (hidden x in), "fc1.bias" (hidden x 1),
// "fc2.weight" (1 x hidden), "fc2.bias" (1 x 1).
struct RankNetConfig {
    std::size_t input_dim = 0;
    std::size_t hidden = 10;
};

struct RankNetModel {
    RankNetConfig config;
    ParamStore params;
};

// Glorot-uniform weights, zero biases; deterministic under seed.
RankNetModel init_ranknet(const RankNetConfig& config, std::uint64_t seed);

struct ScoreTrace {
    std::vector<double> input;
    std::vector<double> pre_hidden;  // before ReLU
    std::vector<double> hidden;
    bool valid = false;
};

// Deterministic forward pass (no dropout inside the scoring network).
double score(const RankNetModel& model, std::span<const double> features,
             ScoreTrace* trace = nullptr);

// Accumulates parameter gradients for one recorded forward pass and returns
// the gradient w.r.t. the input features. Throws std::logic_error if the
// trace was not produced by score.
std::vector<double> score_backward(const ScoreTrace& trace, double d_score,
                                   RankNetModel& model);

// End-to-end model: shared-weight encoder feeding the scoring network.
struct ConvRankNetModel {
    encoder::EncoderModel enc;
    RankNetModel net;
};

ConvRankNetModel init_convranknet(const encoder::EncoderConfig& enc_config,
                                  std::size_t hidden, std::uint64_t seed);

// score of one document given precomputed branch encodings:
// s = net(join_phi(v_q, v_d))
double score_conv(const ConvRankNetModel& model, std::span<const double> v_q,
                  std::span<const double> v_d);

// Forward pass over one (query, doc_i, doc_j) triple with recorded
// intermediates for the backward pass.
struct ConvTripleForward {
    double s_i = 0.0, s_j = 0.0, s_ij = 0.0, loss = 0.0;
    double target = 1.0;
    encoder::EncodeTrace trace_q, trace_i, trace_j;
    ScoreTrace score_i, score_j;
    std::vector<double> v_q, v_i, v_j;
    std::vector<double> phi_i, phi_j;
    bool valid = false;
};

ConvTripleForward conv_triple_forward(const ConvRankNetModel& model,
                                      const embeddings::SentenceMatrix& query,
                                      const embeddings::SentenceMatrix& doc_i,
                                      const embeddings::SentenceMatrix& doc_j,
                                      double target, bool train = false,
                                      Rng* rng = nullptr);

// Accumulates gradients of d_loss * C_ij into both parameter stores.
void conv_triple_backward(const ConvTripleForward& fwd, double d_loss,
                          ConvRankNetModel& model);

struct TrainConfig {
    std::size_t epochs = 500;
    double lr = 1e-5;
    std::size_t batch_size = 64;
    std::uint64_t seed = 0;
};

struct TrainResult {
    std::vector<double> epoch_mean_loss;
};

// Mini-batch SGD on the mean pairwise loss; per-epoch reshuffle and any
// dropout are seeded, so training is deterministic under config.seed.
// Throws std::runtime_error with an epoch/batch diagnostic if the loss
// goes non-finite.
TrainResult train_ranknet(RankNetModel& model,
                          const std::vector<data::FeatureGroup>& groups,
                          const std::vector<Triple>& triples,
                          const TrainConfig& config);

// Text-mode corpus: sentence matrices plus triples indexing into them.
struct ConvTrainingSet {
    std::vector<embeddings::SentenceMatrix> sentences;
    std::vector<Triple> triples;
};

ConvTrainingSet build_conv_training_set(const std::vector<data::TextGroup>& groups,
                                        const embeddings::EmbeddingTable& table,
                                        std::size_t trunc_len = 100);

// Joint end-to-end training of encoder and scoring network.
TrainResult train_convranknet(ConvRankNetModel& model, const ConvTrainingSet& set,
                              const TrainConfig& config);

struct RankedDoc {
    std::size_t index;  // position in the input document list
    double score;
};

// Scores every document against the query and returns them in descending
// score order, ties by ascending input index. The query is encoded once and
// each document once (n + 1 encoder passes for n documents); no document
// pair is ever compared.
std::vector<RankedDoc> rank_documents(const ConvRankNetModel& model,
                                      const embeddings::SentenceMatrix& query,
                                      const std::vector<embeddings::SentenceMatrix>& docs);

}  // namespace ltr::ranker
