#pragma once

#include <memory>
#include <optional>

#include "corpus/embeddings.hpp"
#include "corpus/instance.hpp"
#include "model/context.hpp"
#include "model/dvae.hpp"
#include "model/match.hpp"

namespace argpair::model {

// Full pairwise matcher: argument encoder + representation (per variant),
// argumentative context encoders, quotation-guided attention and the scoring
// head. Owns the parameter store; graph builders are const over it, so a
// snapshot can serve many readers while one trainer owns the writes.
class PairModel {
 public:
  PairModel(ModelConfig cfg, diff::Dtype dtype);
  PairModel(ModelConfig cfg, std::unique_ptr<ParameterStore> store);

  const ModelConfig& config() const { return cfg_; }
  ParameterStore& params() { return *store_; }
  const ParameterStore& params() const { return *store_; }

  // Glorot matrices, zero biases; embedding rows copy pretrained vectors
  // where available and draw Normal(0, 0.1^2) otherwise.
  void init_params(uint64_t seed, const corpus::Vocabulary& vocab,
                   const corpus::WordEmbeddings* pretrained);

  struct InstanceNodes {
    std::vector<Node*> scores;                   // positive first; empty if !with_matching
    std::vector<std::vector<Node*>> posteriors;  // per argument, latent simplex nodes
    std::vector<Node*> recon_losses;             // per argument (q then replies)
    std::vector<Node*> gaussian_kls;             // per argument, continuous-latent variant
  };

  // Wires one encoded instance into g. Training mode samples latents and
  // applies dropout; with_matching=false drops the context/scoring branch
  // (the pure autoencoder path).
  InstanceNodes build_instance(Graph& g, const corpus::Instance& inst, bool training,
                               bool with_matching, Rng* latent_rng, Rng* dropout_rng);

  RankedCandidates rank_instance(const corpus::Instance& inst);

  // Per-argument categorical latent bundle (discrete-latent variant only).
  struct LatentState {
    std::vector<std::vector<double>> logits;
    std::vector<std::vector<double>> posteriors;
    std::vector<std::vector<double>> relaxed;  // filled when sampled
    std::vector<int> codes;                    // 1-based argmax per latent
  };
  LatentState latent_state(const std::vector<int>& ids, bool sample = false,
                           Rng* rng = nullptr);

  const DvaeParams& dvae() const { return dvae_; }
  const ContextParams& context() const { return ctx_; }
  const MatchParams& match() const { return match_; }

 private:
  struct ArgBundle {
    EncodedArgument enc;
    Node* rep = nullptr;
    std::vector<Node*> posteriors;
    Node* recon = nullptr;
    Node* gaussian_kl = nullptr;
  };
  ArgBundle process_argument(Graph& g, const std::vector<int>& ids, bool want_recon,
                             Rng* latent_rng) const;
  Node* encode_context_block(Graph& g, const std::vector<corpus::Argument>& ctx) const;
  void resolve_params();

  ModelConfig cfg_;
  std::unique_ptr<ParameterStore> store_;
  DvaeParams dvae_;
  ContextParams ctx_;
  FlatContextParams flat_;
  MatchParams match_;
  // deterministic-bottleneck variant
  Parameter* ae_w = nullptr;
  Parameter* ae_b = nullptr;
  // continuous Gaussian variant (latent dim = latents * categories)
  Parameter* vae_mu_w = nullptr;
  Parameter* vae_mu_b = nullptr;
  Parameter* vae_lv_w = nullptr;
  Parameter* vae_lv_b = nullptr;
  Parameter* vae_proj = nullptr;
};

}  // namespace argpair::model
