#include "corpus/vocabulary.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "corpus/text.hpp"

namespace argpair::corpus {

namespace {
const char* kReserved[4] = {"<pad>", "<unk>", "<bos>", "<eos>"};
}

Vocabulary::Vocabulary() {
  for (const char* t : kReserved) push(t);
}

void Vocabulary::push(const std::string& token) {
  token_to_id_[token] = static_cast<int>(id_to_token_.size());
  id_to_token_.push_back(token);
}

Vocabulary Vocabulary::build(const std::vector<std::string>& documents, int threshold) {
  if (threshold < 0) throw config_error("vocabulary threshold must be >= 0");

  std::unordered_map<std::string, long> freq;
  for (const auto& doc : documents)
    for (auto& tok : tokenize(doc)) ++freq[tok];

  std::vector<std::pair<std::string, long>> kept;
  for (auto& [tok, n] : freq)
    if (n > threshold) kept.emplace_back(tok, n);
  // frequency-descending, then lexicographic, so ids are deterministic
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  for (auto& [tok, _] : kept) v.push(tok);
  return v;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < 4) throw data_error("vocabulary token list lacks reserved entries");
  for (int i = 0; i < 4; ++i)
    if (tokens[i] != kReserved[i])
      throw data_error("vocabulary token list must start with the reserved tokens");
  Vocabulary v;
  for (size_t i = 4; i < tokens.size(); ++i) v.push(tokens[i]);
  return v;
}

int Vocabulary::id_of(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
  if (id < 0 || id >= size()) throw internal_error("token id out of range");
  return id_to_token_[id];
}

std::vector<int> Vocabulary::encode_tokens(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id_of(t));
  return ids;
}

std::vector<int> Vocabulary::encode(const std::string& text) const {
  return encode_tokens(tokenize(text));
}

std::string Vocabulary::decode(const std::vector<int>& ids) const {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(' ');
    out += token_of(ids[i]);
  }
  return out;
}

}  // namespace argpair::corpus
