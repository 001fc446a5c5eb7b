#pragma once

#include <span>
#include <vector>

#include "model/config.hpp"
#include "nn/gru.hpp"
#include "nn/parameter_store.hpp"

namespace argpair::model {

using diff::Graph;
using diff::Node;
using nn::Parameter;
using nn::ParameterStore;

// Discrete variational autoencoder over one argument: BiGRU encoder, one
// K-way categorical latent per head, Gumbel-Softmax relaxation, GRU decoder
// fed the mapped latent samples, and the posterior-weighted representation R.
struct DvaeParams {
  Parameter* word_emb = nullptr;  // [V, word_dim], shared with the context encoder
  nn::GruParams enc_fw, enc_bw;
  std::vector<Parameter*> head_w;      // latents x [K, 2*enc_hidden]
  std::vector<Parameter*> head_b;      // latents x [K]
  std::vector<Parameter*> latent_emb;  // latents x [K, dec_hidden]
  nn::GruParams dec;
  Parameter* out_w = nullptr;  // [V, dec_hidden]
  Parameter* out_b = nullptr;  // [V]
};

// Ablations reuse the encoder (and sometimes the decoder) without the
// categorical heads; the flags keep unused arrays out of the store.
DvaeParams resolve_dvae(ParameterStore& store, const ModelConfig& cfg,
                        bool with_latents = true, bool with_decoder = true);

struct EncodedArgument {
  std::vector<Node*> states;  // per-token [forward; backward], dim 2*enc_hidden
  Node* last = nullptr;       // final-position concatenation
};

// Errors on an empty token sequence.
EncodedArgument encode_argument(Graph& g, const DvaeParams& p, std::span<const int> ids);

// One logit vector per latent head: l_i = W_i h + b_i.
std::vector<Node*> latent_logits(Graph& g, const DvaeParams& p, Node* h_last);

std::vector<Node*> posteriors_from_logits(Graph& g, const std::vector<Node*>& logits);

// Argmax per head, 1-based, ties to the lowest category. Not a graph op.
std::vector<int> codes_from_logits(const std::vector<Node*>& logits);

// softmax((l + gumbel)/tau) with the noise frozen as a constant leaf, so the
// estimator differentiates through the logits only. Errors when tau <= 0.
Node* gumbel_relax(Graph& g, Node* logits, double tau, Rng& rng);

// h0 = sum_i W_i^T omega_i  (rows of W_i are category embeddings).
Node* decoder_init(Graph& g, const DvaeParams& p, const std::vector<Node*>& omegas);

// Same map applied to the posteriors; train and eval share this path.
Node* discrete_representation(Graph& g, const DvaeParams& p,
                              const std::vector<Node*>& posteriors);

// Teacher-forced mean cross-entropy over BOS..EOS-wrapped targets.
Node* reconstruction_loss(Graph& g, const DvaeParams& p, std::span<const int> ids, Node* h0);

// Fraction of teacher-forced steps whose argmax prediction hits the target.
double teacher_forced_accuracy(Graph& g, const DvaeParams& p, std::span<const int> ids,
                               Node* h0);

}  // namespace argpair::model
