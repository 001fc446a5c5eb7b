#pragma once

#include <string>
#include <vector>

namespace argpair::model {

// Wiring variants used in the ablation study. `full` is the discrete-VAE
// model; the others swap the representation or the context encoder.
enum class Variant {
  full,          // discrete latents + hierarchical context
  match_rnn,     // encoder last state as representation, no context
  match_rnn_cb,  // + flat word-level BiGRU context
  match_rnn_ch,  // + hierarchical context
  match_ae_ch,   // deterministic bottleneck autoencoder + hierarchical context
  match_vae_ch,  // continuous Gaussian latent + hierarchical context
};

Variant variant_from_name(const std::string& name);
const char* variant_name(Variant v);
const std::vector<std::string>& variant_names();

inline bool variant_has_context(Variant v) { return v != Variant::match_rnn; }
inline bool variant_flat_context(Variant v) { return v == Variant::match_rnn_cb; }
inline bool variant_has_dvae(Variant v) { return v == Variant::full; }
inline bool variant_has_ae(Variant v) { return v == Variant::match_ae_ch; }
inline bool variant_has_vae(Variant v) { return v == Variant::match_vae_ch; }
inline bool variant_has_autoencoder(Variant v) {
  return variant_has_dvae(v) || variant_has_ae(v) || variant_has_vae(v);
}

struct ModelConfig {
  int vocab_size = 0;

  // discrete latents
  int latents = 5;     // number of categorical variables
  int categories = 5;  // categories per variable
  double tau = 1.0;    // Gumbel-Softmax temperature

  // encoder / decoder
  int word_dim = 50;
  int enc_hidden = 200;  // per direction
  int dec_hidden = 400;  // decoder state = representation dim

  // context encoder
  int conv_window = 5;
  int conv_filters = 100;
  int attention_dim = 100;
  int doc_hidden = 100;          // per direction
  int max_context_tokens = 300;  // word-level cap for the flat-context variant

  // scoring network
  int mlp_hidden1 = 512;
  int mlp_hidden2 = 128;
  double dropout = 0.5;

  Variant variant = Variant::full;

  int state_dim() const { return 2 * enc_hidden; }
  int rep_dim() const { return dec_hidden; }
  int context_dim() const { return 2 * doc_hidden; }
  int feature_dim() const { return 2 * rep_dim() + state_dim(); }
  int joined_dim() const {
    int d = 2 * rep_dim() + feature_dim();
    if (variant_has_context(variant)) d += 2 * context_dim();
    return d;
  }

  void validate() const;
};

}  // namespace argpair::model
