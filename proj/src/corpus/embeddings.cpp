#include "corpus/embeddings.hpp"

#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace argpair::corpus {

WordEmbeddings WordEmbeddings::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open embeddings file: " + path);

  WordEmbeddings emb;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string token;
    is >> token;
    std::vector<double> values;
    double v;
    while (is >> v) values.push_back(v);
    if (values.empty())
      throw data_error("embeddings " + path + ": no values on line " + std::to_string(line_no));
    if (emb.dim_ == 0) emb.dim_ = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != emb.dim_)
      throw data_error("embeddings " + path + ": dimension changes on line " +
                       std::to_string(line_no));
    emb.table_[token] = std::move(values);
  }
  if (emb.table_.empty()) throw data_error("embeddings file is empty: " + path);
  return emb;
}

const std::vector<double>& WordEmbeddings::vec(const std::string& token) const {
  auto it = table_.find(token);
  if (it == table_.end()) throw internal_error("embedding lookup for unknown token: " + token);
  return it->second;
}

}  // namespace argpair::corpus
