#include "model/match.hpp"

#include <algorithm>
#include <numeric>

#include "common/error.hpp"

namespace argpair::model {

MatchParams resolve_match(ParameterStore& store, const ModelConfig& cfg) {
  auto arr = [&](const std::string& name, std::vector<int> shape) -> Parameter* {
    if (store.has(name)) return &store.get(name);
    return &store.create(name, std::move(shape));
  };
  MatchParams p;
  p.h1_w = arr("match.h1.W", {cfg.mlp_hidden1, cfg.joined_dim()});
  p.h1_b = arr("match.h1.b", {cfg.mlp_hidden1});
  p.h2_w = arr("match.h2.W", {cfg.mlp_hidden2, cfg.mlp_hidden1});
  p.h2_b = arr("match.h2.b", {cfg.mlp_hidden2});
  p.s_w = arr("match.score.W", {cfg.mlp_hidden2});
  p.s_b = arr("match.score.b", {});
  return p;
}

GuidedAttention quotation_guided_attention(Graph& g, Node* rep_q,
                                           const std::vector<Node*>& reply_states,
                                           int valid) {
  if (reply_states.empty())
    throw internal_error("quotation_guided_attention: no reply states");
  if (valid < 0) valid = static_cast<int>(reply_states.size());
  valid = std::min<int>(valid, static_cast<int>(reply_states.size()));

  for (int j = 0; j < valid; ++j)
    if (reply_states[j]->value.shape() != rep_q->value.shape())
      throw ShapeError("quotation_guided_attention", rep_q->value.shape(),
                       reply_states[j]->value.shape());

  std::vector<Node*> dots(valid);
  for (int j = 0; j < valid; ++j) dots[j] = g.dot(rep_q, reply_states[j]);

  GuidedAttention out;
  out.weights = g.softmax(g.concat(dots));
  Node* attended = nullptr;
  for (int j = 0; j < valid; ++j) {
    Node* term = g.smul(reply_states[j], g.pick(out.weights, j));
    attended = attended ? g.add(attended, term) : term;
  }
  out.attended = attended;
  return out;
}

Node* match_features(Graph& g, Node* rep_q, Node* rep_r, Node* attended_reply) {
  Node* product = g.mul(rep_q, rep_r);
  Node* difference = g.sub(rep_q, rep_r);
  return g.concat({product, difference, attended_reply});
}

namespace {
Node* dropout_mask(Graph& g, int n, double p, Rng& rng) {
  diff::DenseArray mask(std::vector<int>{n});
  double keep_scale = 1.0 / (1.0 - p);
  for (int i = 0; i < n; ++i) mask[i] = rng.uniform() < p ? 0.0 : keep_scale;
  return g.constant(std::move(mask));
}
}  // namespace

Node* match_score(Graph& g, const MatchParams& p, const std::vector<Node*>& blocks,
                  double dropout, Rng* dropout_rng) {
  Node* joined = g.concat(blocks);
  if (dropout_rng && dropout > 0.0)
    joined = g.mul(joined, dropout_mask(g, joined->value.size(), dropout, *dropout_rng));

  Node* h1 = g.relu(g.add(g.matvec(g.param(*p.h1_w), joined), g.param(*p.h1_b)));
  if (dropout_rng && dropout > 0.0)
    h1 = g.mul(h1, dropout_mask(g, h1->value.size(), dropout, *dropout_rng));

  Node* h2 = g.relu(g.add(g.matvec(g.param(*p.h2_w), h1), g.param(*p.h2_b)));
  return g.add(g.dot(g.param(*p.s_w), h2), g.param(*p.s_b));
}

RankedCandidates rank_scores(const std::string& instance_id,
                             const std::vector<double>& scores) {
  if (scores.empty()) throw internal_error("rank_scores: no scores");

  RankedCandidates out;
  out.instance_id = instance_id;
  out.scores = scores;
  out.order.resize(scores.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });

  for (size_t pos = 0; pos < out.order.size(); ++pos)
    if (out.order[pos] == 0) out.positive_rank = static_cast<int>(pos) + 1;
  for (size_t i = 1; i < scores.size(); ++i)
    if (scores[i] == scores[0]) out.tie = true;
  return out;
}

}  // namespace argpair::model
