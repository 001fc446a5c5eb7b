#include "model/dvae.hpp"

#include <string>

#include "common/error.hpp"
#include "corpus/vocabulary.hpp"

namespace argpair::model {

DvaeParams resolve_dvae(ParameterStore& store, const ModelConfig& cfg, bool with_latents,
                        bool with_decoder) {
  auto arr = [&](const std::string& name, std::vector<int> shape) -> Parameter* {
    if (store.has(name)) return &store.get(name);
    return &store.create(name, std::move(shape));
  };

  DvaeParams p;
  p.word_emb = arr("emb.word", {cfg.vocab_size, cfg.word_dim});
  p.enc_fw = nn::resolve_gru(store, "enc.fw", cfg.word_dim, cfg.enc_hidden);
  p.enc_bw = nn::resolve_gru(store, "enc.bw", cfg.word_dim, cfg.enc_hidden);
  if (with_latents) {
    for (int i = 0; i < cfg.latents; ++i) {
      std::string idx = std::to_string(i);
      p.head_w.push_back(arr("lat.head" + idx + ".W", {cfg.categories, cfg.state_dim()}));
      p.head_b.push_back(arr("lat.head" + idx + ".b", {cfg.categories}));
      p.latent_emb.push_back(arr("lat.emb" + idx, {cfg.categories, cfg.dec_hidden}));
    }
  }
  if (with_decoder) {
    p.dec = nn::resolve_gru(store, "dec.gru", cfg.word_dim, cfg.dec_hidden);
    p.out_w = arr("dec.out.W", {cfg.vocab_size, cfg.dec_hidden});
    p.out_b = arr("dec.out.b", {cfg.vocab_size});
  }
  return p;
}

EncodedArgument encode_argument(Graph& g, const DvaeParams& p, std::span<const int> ids) {
  if (ids.empty()) throw data_error("encode_argument: empty token sequence");

  Node* emb = g.rows(g.param(*p.word_emb), std::vector<int>(ids.begin(), ids.end()));
  std::vector<Node*> xs(ids.size());
  for (size_t t = 0; t < ids.size(); ++t) xs[t] = g.row(emb, static_cast<int>(t));

  EncodedArgument enc;
  enc.states = nn::bigru_states(g, p.enc_fw, p.enc_bw, xs);
  enc.last = enc.states.back();
  return enc;
}

std::vector<Node*> latent_logits(Graph& g, const DvaeParams& p, Node* h_last) {
  std::vector<Node*> logits;
  logits.reserve(p.head_w.size());
  for (size_t i = 0; i < p.head_w.size(); ++i)
    logits.push_back(g.add(g.matvec(g.param(*p.head_w[i]), h_last), g.param(*p.head_b[i])));
  return logits;
}

std::vector<Node*> posteriors_from_logits(Graph& g, const std::vector<Node*>& logits) {
  std::vector<Node*> out;
  out.reserve(logits.size());
  for (Node* l : logits) out.push_back(g.softmax(l));
  return out;
}

std::vector<int> codes_from_logits(const std::vector<Node*>& logits) {
  std::vector<int> codes;
  codes.reserve(logits.size());
  for (Node* l : logits) {
    int best = 0;
    for (int k = 1; k < l->value.size(); ++k)
      if (l->value[k] > l->value[best]) best = k;  // strict: ties keep the lowest k
    codes.push_back(best + 1);
  }
  return codes;
}

Node* gumbel_relax(Graph& g, Node* logits, double tau, Rng& rng) {
  if (tau <= 0.0) throw config_error("gumbel_relax: tau must be positive");
  diff::DenseArray noise(logits->value.shape());
  for (int k = 0; k < noise.size(); ++k) noise[k] = rng.gumbel();
  return g.softmax(g.cmul(g.add(logits, g.constant(std::move(noise))), 1.0 / tau));
}

Node* decoder_init(Graph& g, const DvaeParams& p, const std::vector<Node*>& omegas) {
  if (omegas.size() != p.latent_emb.size())
    throw internal_error("decoder_init: sample count does not match latent count");
  Node* h0 = nullptr;
  for (size_t i = 0; i < omegas.size(); ++i) {
    Node* term = g.matvec_t(g.param(*p.latent_emb[i]), omegas[i]);
    h0 = h0 ? g.add(h0, term) : term;
  }
  return h0;
}

Node* discrete_representation(Graph& g, const DvaeParams& p,
                              const std::vector<Node*>& posteriors) {
  return decoder_init(g, p, posteriors);  // same latent-embedding map, posterior inputs
}

Node* reconstruction_loss(Graph& g, const DvaeParams& p, std::span<const int> ids, Node* h0) {
  if (ids.empty()) throw data_error("reconstruction_loss: empty token sequence");

  std::vector<int> inputs;
  inputs.push_back(corpus::Vocabulary::kBos);
  inputs.insert(inputs.end(), ids.begin(), ids.end());
  std::vector<int> targets(ids.begin(), ids.end());
  targets.push_back(corpus::Vocabulary::kEos);

  Node* emb = g.rows(g.param(*p.word_emb), inputs);
  Node* h = h0;
  Node* total = nullptr;
  for (size_t t = 0; t < targets.size(); ++t) {
    h = nn::gru_step(g, p.dec, g.row(emb, static_cast<int>(t)), h);
    Node* logits = g.add(g.matvec(g.param(*p.out_w), h), g.param(*p.out_b));
    Node* nll = g.cmul(g.pick(g.log_softmax(logits), targets[t]), -1.0);
    total = total ? g.add(total, nll) : nll;
  }
  return g.cmul(total, 1.0 / static_cast<double>(targets.size()));
}

double teacher_forced_accuracy(Graph& g, const DvaeParams& p, std::span<const int> ids,
                               Node* h0) {
  std::vector<int> inputs;
  inputs.push_back(corpus::Vocabulary::kBos);
  inputs.insert(inputs.end(), ids.begin(), ids.end());
  std::vector<int> targets(ids.begin(), ids.end());
  targets.push_back(corpus::Vocabulary::kEos);

  Node* emb = g.rows(g.param(*p.word_emb), inputs);
  Node* h = h0;
  int hits = 0;
  for (size_t t = 0; t < targets.size(); ++t) {
    h = nn::gru_step(g, p.dec, g.row(emb, static_cast<int>(t)), h);
    Node* logits = g.add(g.matvec(g.param(*p.out_w), h), g.param(*p.out_b));
    int best = 0;
    for (int k = 1; k < logits->value.size(); ++k)
      if (logits->value[k] > logits->value[best]) best = k;
    if (best == targets[t]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(targets.size());
}

}  // namespace argpair::model
