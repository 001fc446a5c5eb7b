#include "model/context.hpp"

#include "common/error.hpp"
#include "common/log.hpp"
#include "corpus/vocabulary.hpp"

namespace argpair::model {

ContextParams resolve_context(ParameterStore& store, const ModelConfig& cfg) {
  auto arr = [&](const std::string& name, std::vector<int> shape) -> Parameter* {
    if (store.has(name)) return &store.get(name);
    return &store.create(name, std::move(shape));
  };
  ContextParams p;
  p.conv_w = arr("ctx.conv.W", {cfg.conv_filters, cfg.conv_window * cfg.word_dim});
  p.conv_b = arr("ctx.conv.b", {cfg.conv_filters});
  p.att_w = arr("ctx.att.W", {cfg.attention_dim, cfg.conv_filters});
  p.att_b = arr("ctx.att.b", {cfg.attention_dim});
  p.att_u = arr("ctx.att.u", {cfg.attention_dim});
  p.doc_fw = nn::resolve_gru(store, "ctx.doc.fw", cfg.conv_filters, cfg.doc_hidden);
  p.doc_bw = nn::resolve_gru(store, "ctx.doc.bw", cfg.conv_filters, cfg.doc_hidden);
  return p;
}

FlatContextParams resolve_flat_context(ParameterStore& store, const ModelConfig& cfg) {
  FlatContextParams p;
  p.fw = nn::resolve_gru(store, "ctx.flat.fw", cfg.word_dim, cfg.doc_hidden);
  p.bw = nn::resolve_gru(store, "ctx.flat.bw", cfg.word_dim, cfg.doc_hidden);
  return p;
}

ArgumentEmbedding argument_embed(Graph& g, const ContextParams& p, Parameter& word_emb,
                                 std::span<const int> ids, const ModelConfig& cfg,
                                 int true_len) {
  if (ids.empty()) throw data_error("argument_embed: empty token sequence");
  if (true_len < 0) true_len = static_cast<int>(ids.size());
  true_len = std::min<int>(true_len, static_cast<int>(ids.size()));

  std::vector<int> padded(ids.begin(), ids.end());
  while (static_cast<int>(padded.size()) < cfg.conv_window)
    padded.push_back(corpus::Vocabulary::kPad);

  Node* emb = g.rows(g.param(word_emb), padded);
  Node* features = g.relu(g.add_row(g.conv1d(emb, g.param(*p.conv_w), cfg.conv_window),
                                    g.param(*p.conv_b)));

  // windows starting past the real tokens carry padding only
  int valid = std::max(1, true_len - cfg.conv_window + 1);
  valid = std::min(valid, features->value.rows());

  std::vector<Node*> feature_rows(valid), scores(valid);
  for (int i = 0; i < valid; ++i) {
    feature_rows[i] = g.row(features, i);
    Node* m = g.tanh(g.add(g.matvec(g.param(*p.att_w), feature_rows[i]), g.param(*p.att_b)));
    scores[i] = g.dot(g.param(*p.att_u), m);
  }

  ArgumentEmbedding out;
  out.positions = valid;
  out.weights = g.softmax(g.concat(scores));
  Node* pooled = nullptr;
  for (int i = 0; i < valid; ++i) {
    Node* term = g.smul(feature_rows[i], g.pick(out.weights, i));
    pooled = pooled ? g.add(pooled, term) : term;
  }
  out.pooled = pooled;
  return out;
}

ContextRep context_encode(Graph& g, const ContextParams& p, Parameter& word_emb,
                          const std::vector<std::vector<int>>& args, const ModelConfig& cfg) {
  ContextRep rep;
  if (args.empty()) {
    warn("context_encode: empty context, using a zero vector");
    rep.pooled = g.zeros(cfg.context_dim());
    return rep;
  }

  for (const auto& ids : args)
    rep.arg_embeddings.push_back(argument_embed(g, p, word_emb, ids, cfg).pooled);

  auto states = nn::bigru_states(g, p.doc_fw, p.doc_bw, rep.arg_embeddings);
  Node* total = nullptr;
  for (Node* s : states) total = total ? g.add(total, s) : s;
  rep.pooled = g.cmul(total, 1.0 / static_cast<double>(states.size()));
  return rep;
}

Node* flat_context_encode(Graph& g, const FlatContextParams& p, Parameter& word_emb,
                          const std::vector<std::vector<int>>& args, const ModelConfig& cfg) {
  std::vector<int> all_ids;
  for (const auto& ids : args) {
    for (int id : ids) {
      if (static_cast<int>(all_ids.size()) >= cfg.max_context_tokens) break;
      all_ids.push_back(id);
    }
  }
  if (all_ids.empty()) {
    warn("flat_context_encode: empty context, using a zero vector");
    return g.zeros(cfg.context_dim());
  }

  Node* emb = g.rows(g.param(word_emb), all_ids);
  std::vector<Node*> xs(all_ids.size());
  for (size_t t = 0; t < all_ids.size(); ++t) xs[t] = g.row(emb, static_cast<int>(t));
  auto states = nn::bigru_states(g, p.fw, p.bw, xs);
  Node* total = nullptr;
  for (Node* s : states) total = total ? g.add(total, s) : s;
  return g.cmul(total, 1.0 / static_cast<double>(states.size()));
}

}  // namespace argpair::model
