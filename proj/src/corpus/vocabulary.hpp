#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace argpair::corpus {

// Token <-> id map with reserved ids 0..3. A token is kept when its corpus
// frequency is strictly greater than the threshold.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;

  Vocabulary();

  static Vocabulary build(const std::vector<std::string>& documents, int threshold);
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  int size() const { return static_cast<int>(id_to_token_.size()); }
  int id_of(const std::string& token) const;
  const std::string& token_of(int id) const;
  bool contains(const std::string& token) const { return token_to_id_.count(token) > 0; }

  std::vector<int> encode_tokens(const std::vector<std::string>& tokens) const;
  std::vector<int> encode(const std::string& text) const;
  std::string decode(const std::vector<int>& ids) const;

  const std::vector<std::string>& tokens() const { return id_to_token_; }

 private:
  void push(const std::string& token);

  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
};

}  // namespace argpair::corpus
