#pragma once

#include <string>
#include <vector>

#include "model/config.hpp"
#include "nn/parameter_store.hpp"

namespace argpair::model {

using diff::Graph;
using diff::Node;
using nn::Parameter;
using nn::ParameterStore;

// Scoring head: two rectified fully connected layers over the joined blocks
// [R_q; R_r; C_q; C_r; f_m], then a linear map to the scalar score.
struct MatchParams {
  Parameter* h1_w = nullptr;
  Parameter* h1_b = nullptr;
  Parameter* h2_w = nullptr;
  Parameter* h2_b = nullptr;
  Parameter* s_w = nullptr;  // [mlp_hidden2]
  Parameter* s_b = nullptr;  // scalar
};

MatchParams resolve_match(ParameterStore& store, const ModelConfig& cfg);

struct GuidedAttention {
  Node* weights = nullptr;  // simplex over reply positions
  Node* attended = nullptr; // weighted state sum, dim 2*enc_hidden
};

// Dot products between the quotation representation and each reply state,
// softmax over positions. `valid` masks trailing padded states out of the
// softmax (-1 keeps everything). Errors when dimensions differ.
GuidedAttention quotation_guided_attention(Graph& g, Node* rep_q,
                                           const std::vector<Node*>& reply_states,
                                           int valid = -1);

// [product; difference; attended reply].
Node* match_features(Graph& g, Node* rep_q, Node* rep_r, Node* attended_reply);

// Inverted dropout masks (train only) on the joined vector and the first
// hidden layer; evaluation applies no rescale.
Node* match_score(Graph& g, const MatchParams& p, const std::vector<Node*>& blocks,
                  double dropout, Rng* dropout_rng);

// Deterministic ranking of one instance's candidate scores: descending score,
// ties by candidate index (the positive sits at index 0).
struct RankedCandidates {
  std::string instance_id;
  std::vector<double> scores;  // candidate order: positive first
  std::vector<int> order;      // candidate indices, best first
  int positive_rank = 0;       // 1-based
  bool tie = false;            // positive score equal to some other candidate
};

RankedCandidates rank_scores(const std::string& instance_id, const std::vector<double>& scores);

}  // namespace argpair::model
