#pragma once

#include <string>
#include <vector>

#include "nn/parameter_store.hpp"

namespace argpair::nn {

using diff::Graph;
using diff::Node;

// Gated recurrent unit:
//   r = sigmoid(Wr x + Ur h + br)
//   z = sigmoid(Wz x + Uz h + bz)
//   n = tanh(Wn x + r * (Un h) + bn)
//   h' = (1 - z) * n + z * h
struct GruParams {
  Parameter *w_r, *w_z, *w_n;  // [hidden, in]
  Parameter *u_r, *u_z, *u_n;  // [hidden, hidden]
  Parameter *b_r, *b_z, *b_n;  // [hidden]
  int in_dim = 0;
  int hidden = 0;
};

// Creates the nine arrays under `prefix.*`, or resolves them when the store
// was populated from a checkpoint.
GruParams resolve_gru(ParameterStore& store, const std::string& prefix, int in_dim, int hidden);

Node* gru_step(Graph& g, const GruParams& p, Node* x, Node* h);

// Unrolls over xs; h0 is zero. reverse=true scans right-to-left and returns
// states re-aligned to input order.
std::vector<Node*> gru_sequence(Graph& g, const GruParams& p, const std::vector<Node*>& xs,
                                bool reverse);

// Per-step [forward; backward] concatenations.
std::vector<Node*> bigru_states(Graph& g, const GruParams& fw, const GruParams& bw,
                                const std::vector<Node*>& xs);

}  // namespace argpair::nn
