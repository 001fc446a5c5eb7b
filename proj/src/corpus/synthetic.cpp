#include "corpus/synthetic.hpp"

#include <array>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "corpus/text.hpp"

namespace argpair::corpus {

namespace {

constexpr int kFamilyCount = 10;
constexpr int kFamilyWords = 8;

const std::array<std::array<const char*, kFamilyWords>, kFamilyCount> kFamilies = {{
    {"solar", "panels", "grid", "energy", "inverter", "sunlight", "battery", "kilowatt"},
    {"referee", "penalty", "goal", "keeper", "midfield", "striker", "offside", "stadium"},
    {"senate", "ballot", "veto", "congress", "lobbying", "mandate", "quorum", "statute"},
    {"tariff", "inflation", "exports", "subsidy", "deficit", "currency", "wages", "markets"},
    {"orbit", "rocket", "payload", "telescope", "asteroid", "thruster", "lander", "gravity"},
    {"sourdough", "oven", "yeast", "flour", "kneading", "crust", "proofing", "bakery"},
    {"checkmate", "gambit", "bishop", "endgame", "castling", "pawn", "blunder", "tempo"},
    {"glacier", "emissions", "carbon", "methane", "permafrost", "drought", "albedo", "biomass"},
    {"vaccine", "antibody", "placebo", "dosage", "pathogen", "immunity", "trial", "symptom"},
    {"verdict", "appeal", "statutes", "testimony", "juror", "plaintiff", "hearsay", "tort"},
}};

const std::array<const char*, 28> kFillers = {
    "the",  "i",    "think", "that", "we",   "should", "because", "it",   "is",    "really",
    "not",  "very", "people", "can", "will", "do",     "more",    "a",    "good",  "but",
    "also", "you",  "many",  "this", "so",   "still",  "would",   "then",
};

std::string family_sentence(Rng& rng, int family, const std::vector<int>& keyword_ids) {
  std::vector<std::string> words;
  int fillers = 5 + rng.uniform_int(4);
  size_t kw = 0;
  for (int i = 0; i < fillers || kw < keyword_ids.size(); ++i) {
    if (i < fillers) words.push_back(kFillers[rng.uniform_int(kFillers.size())]);
    if (kw < keyword_ids.size() && i % 2 == 1)
      words.push_back(kFamilies[family][keyword_ids[kw++]]);
  }
  std::string text = join_tokens(words);
  text += " .";
  return text;
}

std::vector<int> draw_keywords(Rng& rng, int count) {
  std::vector<int> pool(kFamilyWords);
  for (int i = 0; i < kFamilyWords; ++i) pool[i] = i;
  for (int k = 0; k < count; ++k) {
    int j = k + rng.uniform_int(kFamilyWords - k);
    std::swap(pool[k], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::vector<Argument> family_context(Rng& rng, int family, const std::string& avoid_norm) {
  std::vector<Argument> ctx;
  int n = 2 + rng.uniform_int(3);
  for (int i = 0; i < n; ++i) {
    std::string s = family_sentence(rng, family, draw_keywords(rng, 3));
    if (normalize(s) == avoid_norm) s = family_sentence(rng, family, draw_keywords(rng, 3));
    ctx.push_back({s, {}});
  }
  return ctx;
}

}  // namespace

SyntheticCorpus generate_synthetic(int templates, int instances, uint64_t seed) {
  if (templates < 2) throw config_error("generate_synthetic: need at least 2 templates");
  if (templates > kFamilyCount)
    throw config_error("generate_synthetic: at most " + std::to_string(kFamilyCount) +
                       " templates available");
  if (instances < 1) throw config_error("generate_synthetic: need at least 1 instance");

  Rng rng = Rng(seed).stream("synthetic");
  SyntheticCorpus corpus;

  for (int i = 0; i < instances; ++i) {
    Instance inst;
    inst.id = "synth#" + std::to_string(i);

    int family = rng.uniform_int(templates);
    std::vector<int> q_kws = draw_keywords(rng, 4);
    inst.quotation.text = family_sentence(rng, family, q_kws);
    std::string q_norm = normalize(inst.quotation.text);
    inst.quotation_context = family_context(rng, family, q_norm);

    // positive reply repeats three quotation keywords plus one fresh one
    std::vector<int> r_kws(q_kws.begin(), q_kws.begin() + 3);
    r_kws.push_back(q_kws[3] == kFamilyWords - 1 ? 0 : q_kws[3] + 1);
    Reply pos;
    pos.positive = true;
    pos.arg.text = family_sentence(rng, family, r_kws);
    pos.context = family_context(rng, family, q_norm);
    inst.replies.push_back(std::move(pos));

    for (int k = 0; k < 4; ++k) {
      int neg_family = rng.uniform_int(templates - 1);
      if (neg_family >= family) ++neg_family;
      Reply neg;
      neg.arg.text = family_sentence(rng, neg_family, draw_keywords(rng, 4));
      neg.context = family_context(rng, neg_family, q_norm);
      inst.replies.push_back(std::move(neg));
    }
    corpus.instances.push_back(std::move(inst));
  }

  std::vector<std::string> docs;
  for (const auto& inst : corpus.instances) {
    docs.push_back(inst.quotation.text);
    for (const auto& a : inst.quotation_context) docs.push_back(a.text);
    for (const auto& r : inst.replies) {
      docs.push_back(r.arg.text);
      for (const auto& a : r.context) docs.push_back(a.text);
    }
  }
  corpus.vocab = Vocabulary::build(docs, 0);
  return corpus;
}

}  // namespace argpair::corpus
