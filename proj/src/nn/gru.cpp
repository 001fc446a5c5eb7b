#include "nn/gru.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace argpair::nn {

GruParams resolve_gru(ParameterStore& store, const std::string& prefix, int in_dim, int hidden) {
  auto arr = [&](const std::string& suffix, std::vector<int> shape) -> Parameter* {
    std::string name = prefix + "." + suffix;
    if (store.has(name)) return &store.get(name);
    return &store.create(name, std::move(shape));
  };
  GruParams p;
  p.w_r = arr("Wr", {hidden, in_dim});
  p.w_z = arr("Wz", {hidden, in_dim});
  p.w_n = arr("Wn", {hidden, in_dim});
  p.u_r = arr("Ur", {hidden, hidden});
  p.u_z = arr("Uz", {hidden, hidden});
  p.u_n = arr("Un", {hidden, hidden});
  p.b_r = arr("br", {hidden});
  p.b_z = arr("bz", {hidden});
  p.b_n = arr("bn", {hidden});
  p.in_dim = in_dim;
  p.hidden = hidden;
  return p;
}

Node* gru_step(Graph& g, const GruParams& p, Node* x, Node* h) {
  Node* r = g.sigmoid(g.add(g.add(g.matvec(g.param(*p.w_r), x), g.matvec(g.param(*p.u_r), h)),
                            g.param(*p.b_r)));
  Node* z = g.sigmoid(g.add(g.add(g.matvec(g.param(*p.w_z), x), g.matvec(g.param(*p.u_z), h)),
                            g.param(*p.b_z)));
  Node* n = g.tanh(g.add(g.add(g.matvec(g.param(*p.w_n), x), g.mul(r, g.matvec(g.param(*p.u_n), h))),
                         g.param(*p.b_n)));
  return g.add(g.mul(g.sub(g.ones(p.hidden), z), n), g.mul(z, h));
}

std::vector<Node*> gru_sequence(Graph& g, const GruParams& p, const std::vector<Node*>& xs,
                                bool reverse) {
  if (xs.empty()) throw internal_error("gru_sequence: empty input");
  std::vector<Node*> states(xs.size());
  Node* h = g.zeros(p.hidden);
  if (!reverse) {
    for (size_t t = 0; t < xs.size(); ++t) {
      h = gru_step(g, p, xs[t], h);
      states[t] = h;
    }
  } else {
    for (size_t i = xs.size(); i-- > 0;) {
      h = gru_step(g, p, xs[i], h);
      states[i] = h;
    }
  }
  return states;
}

std::vector<Node*> bigru_states(Graph& g, const GruParams& fw, const GruParams& bw,
                                const std::vector<Node*>& xs) {
  auto f = gru_sequence(g, fw, xs, false);
  auto b = gru_sequence(g, bw, xs, true);
  std::vector<Node*> out(xs.size());
  for (size_t t = 0; t < xs.size(); ++t) out[t] = g.concat({f[t], b[t]});
  return out;
}

}  // namespace argpair::nn
