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

// Hierarchical context encoder: per-argument convolution with attention
// pooling, then a document-level BiGRU averaged over arguments.
struct ContextParams {
  Parameter* conv_w = nullptr;  // [filters, window*word_dim]
  Parameter* conv_b = nullptr;  // [filters]
  Parameter* att_w = nullptr;   // [attention_dim, filters]
  Parameter* att_b = nullptr;   // [attention_dim]
  Parameter* att_u = nullptr;   // [attention_dim]
  nn::GruParams doc_fw, doc_bw;
};

ContextParams resolve_context(ParameterStore& store, const ModelConfig& cfg);

// Word-level BiGRU for the flat-context variant.
struct FlatContextParams {
  nn::GruParams fw, bw;
};
FlatContextParams resolve_flat_context(ParameterStore& store, const ModelConfig& cfg);

struct ArgumentEmbedding {
  Node* pooled = nullptr;   // attention mixture of window features, dim filters
  Node* weights = nullptr;  // attention over valid positions (sums to 1)
  int positions = 0;        // valid window count; padded windows are excluded
};

// Convolves the embedded tokens with valid windows (input shorter than the
// window is right-padded with the PAD embedding) and attention-pools the
// features. `true_len` marks how many leading ids are real tokens; windows
// that start past the real text get no attention mass.
ArgumentEmbedding argument_embed(Graph& g, const ContextParams& p, Parameter& word_emb,
                                 std::span<const int> ids, const ModelConfig& cfg,
                                 int true_len = -1);

struct ContextRep {
  std::vector<Node*> arg_embeddings;
  Node* pooled = nullptr;  // mean of document BiGRU states, dim 2*doc_hidden
};

// Empty contexts yield a zero vector and a data warning (quote scrubbing can
// strip a post bare).
ContextRep context_encode(Graph& g, const ContextParams& p, Parameter& word_emb,
                          const std::vector<std::vector<int>>& args, const ModelConfig& cfg);

// All context tokens as one sequence through a word-level BiGRU, mean-pooled.
Node* flat_context_encode(Graph& g, const FlatContextParams& p, Parameter& word_emb,
                          const std::vector<std::vector<int>>& args, const ModelConfig& cfg);

}  // namespace argpair::model
