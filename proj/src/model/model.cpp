#include "model/model.hpp"

#include "common/error.hpp"
#include "corpus/vocabulary.hpp"

namespace argpair::model {

PairModel::PairModel(ModelConfig cfg, diff::Dtype dtype)
    : cfg_(std::move(cfg)), store_(std::make_unique<ParameterStore>(dtype)) {
  cfg_.validate();
  resolve_params();
}

PairModel::PairModel(ModelConfig cfg, std::unique_ptr<ParameterStore> store)
    : cfg_(std::move(cfg)), store_(std::move(store)) {
  cfg_.validate();
  resolve_params();
}

void PairModel::resolve_params() {
  Variant v = cfg_.variant;
  dvae_ = resolve_dvae(*store_, cfg_, variant_has_dvae(v), variant_has_autoencoder(v));

  auto arr = [&](const std::string& name, std::vector<int> shape) -> Parameter* {
    if (store_->has(name)) return &store_->get(name);
    return &store_->create(name, std::move(shape));
  };
  if (variant_has_ae(v)) {
    ae_w = arr("ae.W", {cfg_.dec_hidden, cfg_.state_dim()});
    ae_b = arr("ae.b", {cfg_.dec_hidden});
  }
  if (variant_has_vae(v)) {
    int latent_dim = cfg_.latents * cfg_.categories;
    vae_mu_w = arr("vae.mu.W", {latent_dim, cfg_.state_dim()});
    vae_mu_b = arr("vae.mu.b", {latent_dim});
    vae_lv_w = arr("vae.lv.W", {latent_dim, cfg_.state_dim()});
    vae_lv_b = arr("vae.lv.b", {latent_dim});
    vae_proj = arr("vae.proj", {latent_dim, cfg_.dec_hidden});
  }
  if (variant_has_context(v)) {
    if (variant_flat_context(v))
      flat_ = resolve_flat_context(*store_, cfg_);
    else
      ctx_ = resolve_context(*store_, cfg_);
  }
  match_ = resolve_match(*store_, cfg_);
}

void PairModel::init_params(uint64_t seed, const corpus::Vocabulary& vocab,
                            const corpus::WordEmbeddings* pretrained) {
  if (vocab.size() != cfg_.vocab_size)
    throw internal_error("vocabulary size does not match model config");
  if (pretrained && pretrained->dim() != cfg_.word_dim)
    throw data_error("pretrained embedding dimension " + std::to_string(pretrained->dim()) +
                     " does not match word_dim " + std::to_string(cfg_.word_dim));

  Rng wrng = Rng(seed).stream("init");
  for (Parameter* p : store_->all()) {
    if (p == dvae_.word_emb) continue;
    size_t cut = p->name.rfind('.');
    std::string leaf = cut == std::string::npos ? p->name : p->name.substr(cut + 1);
    if (!leaf.empty() && leaf[0] == 'b')
      p->value.fill(0.0);
    else
      nn::init_glorot(*p, wrng);
  }

  Rng erng = Rng(seed).stream("emb");
  Parameter& emb = *dvae_.word_emb;
  for (int id = 0; id < cfg_.vocab_size; ++id) {
    const std::string& token = vocab.token_of(id);
    if (id == corpus::Vocabulary::kPad) {
      for (int j = 0; j < cfg_.word_dim; ++j) emb.value.at(id, j) = 0.0;
    } else if (pretrained && pretrained->has(token)) {
      const auto& row = pretrained->vec(token);
      for (int j = 0; j < cfg_.word_dim; ++j) emb.value.at(id, j) = row[j];
    } else {
      for (int j = 0; j < cfg_.word_dim; ++j) emb.value.at(id, j) = erng.normal(0.0, 0.1);
    }
  }
}

PairModel::ArgBundle PairModel::process_argument(Graph& g, const std::vector<int>& ids,
                                                 bool want_recon, Rng* latent_rng) const {
  if (ids.empty()) throw data_error("instance is not encoded (empty id sequence)");

  ArgBundle b;
  b.enc = encode_argument(g, dvae_, ids);

  switch (cfg_.variant) {
    case Variant::full: {
      auto logits = latent_logits(g, dvae_, b.enc.last);
      b.posteriors = posteriors_from_logits(g, logits);
      b.rep = discrete_representation(g, dvae_, b.posteriors);
      if (want_recon) {
        if (!latent_rng) throw internal_error("reconstruction requires a latent rng");
        std::vector<Node*> omegas;
        omegas.reserve(logits.size());
        for (Node* l : logits) omegas.push_back(gumbel_relax(g, l, cfg_.tau, *latent_rng));
        b.recon = reconstruction_loss(g, dvae_, ids, decoder_init(g, dvae_, omegas));
      }
      break;
    }
    case Variant::match_rnn:
    case Variant::match_rnn_cb:
    case Variant::match_rnn_ch: {
      b.rep = b.enc.last;
      break;
    }
    case Variant::match_ae_ch: {
      Node* h0 = g.add(g.matvec(g.param(*ae_w), b.enc.last), g.param(*ae_b));
      b.rep = h0;
      if (want_recon) b.recon = reconstruction_loss(g, dvae_, ids, h0);
      break;
    }
    case Variant::match_vae_ch: {
      Node* mu = g.add(g.matvec(g.param(*vae_mu_w), b.enc.last), g.param(*vae_mu_b));
      b.rep = g.matvec_t(g.param(*vae_proj), mu);  // mean latent on the matching path
      if (want_recon) {
        if (!latent_rng) throw internal_error("reconstruction requires a latent rng");
        Node* logvar =
            g.add(g.matvec(g.param(*vae_lv_w), b.enc.last), g.param(*vae_lv_b));
        int latent_dim = cfg_.latents * cfg_.categories;
        diff::DenseArray eps(std::vector<int>{latent_dim});
        for (int i = 0; i < latent_dim; ++i) eps[i] = latent_rng->normal();
        Node* z = g.add(mu, g.mul(g.exp(g.cmul(logvar, 0.5)), g.constant(std::move(eps))));
        b.recon = reconstruction_loss(g, dvae_, ids, g.matvec_t(g.param(*vae_proj), z));
        // KL(N(mu, sigma^2) || N(0, I)) summed over latent dims
        Node* term = g.sub(g.sub(g.add(g.mul(mu, mu), g.exp(logvar)), logvar),
                           g.ones(latent_dim));
        b.gaussian_kl = g.cmul(g.sum(term), 0.5);
      }
      break;
    }
  }
  return b;
}

Node* PairModel::encode_context_block(Graph& g,
                                      const std::vector<corpus::Argument>& ctx) const {
  std::vector<std::vector<int>> args;
  for (const auto& a : ctx)
    if (!a.ids.empty()) args.push_back(a.ids);
  if (variant_flat_context(cfg_.variant))
    return flat_context_encode(g, flat_, *dvae_.word_emb, args, cfg_);
  return context_encode(g, ctx_, *dvae_.word_emb, args, cfg_).pooled;
}

PairModel::InstanceNodes PairModel::build_instance(Graph& g, const corpus::Instance& inst,
                                                   bool training, bool with_matching,
                                                   Rng* latent_rng, Rng* dropout_rng) {
  InstanceNodes out;
  bool want_recon = variant_has_autoencoder(cfg_.variant);

  ArgBundle q = process_argument(g, inst.quotation.ids, want_recon, latent_rng);
  std::vector<ArgBundle> replies;
  replies.reserve(inst.replies.size());
  for (const auto& r : inst.replies)
    replies.push_back(process_argument(g, r.arg.ids, want_recon, latent_rng));

  auto collect = [&](const ArgBundle& b) {
    if (!b.posteriors.empty()) out.posteriors.push_back(b.posteriors);
    if (b.recon) out.recon_losses.push_back(b.recon);
    if (b.gaussian_kl) out.gaussian_kls.push_back(b.gaussian_kl);
  };
  collect(q);
  for (const auto& b : replies) collect(b);

  if (!with_matching) return out;

  Node* ctx_q = nullptr;
  if (variant_has_context(cfg_.variant))
    ctx_q = encode_context_block(g, inst.quotation_context);

  Rng* drop = training ? dropout_rng : nullptr;
  for (size_t r = 0; r < replies.size(); ++r) {
    auto attention = quotation_guided_attention(g, q.rep, replies[r].enc.states);
    Node* features = match_features(g, q.rep, replies[r].rep, attention.attended);

    std::vector<Node*> blocks{q.rep, replies[r].rep};
    if (ctx_q) {
      blocks.push_back(ctx_q);
      blocks.push_back(encode_context_block(g, inst.replies[r].context));
    }
    blocks.push_back(features);
    out.scores.push_back(match_score(g, match_, blocks, cfg_.dropout, drop));
  }
  return out;
}

RankedCandidates PairModel::rank_instance(const corpus::Instance& inst) {
  Graph g(store_->dtype());
  auto nodes = build_instance(g, inst, false, true, nullptr, nullptr);
  std::vector<double> scores;
  scores.reserve(nodes.scores.size());
  for (Node* s : nodes.scores) scores.push_back(s->value.value());
  return rank_scores(inst.id, scores);
}

PairModel::LatentState PairModel::latent_state(const std::vector<int>& ids, bool sample,
                                               Rng* rng) {
  if (!variant_has_dvae(cfg_.variant))
    throw config_error("latent_state requires the discrete-latent variant");

  Graph g(store_->dtype());
  auto enc = encode_argument(g, dvae_, ids);
  auto logits = latent_logits(g, dvae_, enc.last);
  auto posts = posteriors_from_logits(g, logits);

  LatentState st;
  auto values = [](Node* n) {
    std::vector<double> v(n->value.data(), n->value.data() + n->value.size());
    return v;
  };
  for (size_t i = 0; i < logits.size(); ++i) {
    st.logits.push_back(values(logits[i]));
    st.posteriors.push_back(values(posts[i]));
    if (sample) {
      if (!rng) throw internal_error("latent_state: sampling requires an rng");
      st.relaxed.push_back(values(gumbel_relax(g, logits[i], cfg_.tau, *rng)));
    }
  }
  st.codes = codes_from_logits(logits);
  return st;
}

}  // namespace argpair::model
