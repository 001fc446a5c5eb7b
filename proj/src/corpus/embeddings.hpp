#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace argpair::corpus {

// Pretrained word vectors: plain text, one token followed by whitespace-
// separated reals per line. All lines must agree on the dimension.
class WordEmbeddings {
 public:
  static WordEmbeddings load(const std::string& path);

  int dim() const { return dim_; }
  size_t size() const { return table_.size(); }
  bool has(const std::string& token) const { return table_.count(token) > 0; }
  const std::vector<double>& vec(const std::string& token) const;

 private:
  int dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> table_;
};

}  // namespace argpair::corpus
