#include "model/config.hpp"

#include "common/error.hpp"

namespace argpair::model {

const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names = {
      "match_rnn", "match_rnn_Cb", "match_rnn_Ch", "match_ae_Ch", "match_vae_Ch", "full",
  };
  return names;
}

Variant variant_from_name(const std::string& name) {
  if (name == "full") return Variant::full;
  if (name == "match_rnn") return Variant::match_rnn;
  if (name == "match_rnn_Cb") return Variant::match_rnn_cb;
  if (name == "match_rnn_Ch") return Variant::match_rnn_ch;
  if (name == "match_ae_Ch") return Variant::match_ae_ch;
  if (name == "match_vae_Ch") return Variant::match_vae_ch;

  std::string valid;
  for (const auto& n : variant_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw config_error("unknown ablation '" + name + "'; valid names: " + valid);
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::match_rnn: return "match_rnn";
    case Variant::match_rnn_cb: return "match_rnn_Cb";
    case Variant::match_rnn_ch: return "match_rnn_Ch";
    case Variant::match_ae_ch: return "match_ae_Ch";
    case Variant::match_vae_ch: return "match_vae_Ch";
  }
  return "?";
}

void ModelConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw config_error("model config: " + msg);
  };
  need(vocab_size >= 4, "vocab_size must cover the reserved tokens");
  need(latents >= 1, "latents must be >= 1");
  need(categories >= 2, "categories must be >= 2");
  need(tau > 0.0, "tau must be positive");
  need(word_dim >= 1 && enc_hidden >= 1 && dec_hidden >= 1, "dimensions must be positive");
  need(dec_hidden == 2 * enc_hidden,
       "dec_hidden must equal 2*enc_hidden so quotation-guided attention dots close");
  need(conv_window >= 1 && conv_filters >= 1 && attention_dim >= 1 && doc_hidden >= 1,
       "context dimensions must be positive");
  need(mlp_hidden1 >= 1 && mlp_hidden2 >= 1, "scoring layers must be positive");
  need(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  need(max_context_tokens >= conv_window, "max_context_tokens too small");
}

}  // namespace argpair::model
