#include "corpus/stats.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "common/error.hpp"
#include "corpus/text.hpp"

namespace argpair::corpus {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd ms;
  if (xs.empty()) return ms;
  double sum = 0.0;
  for (double x : xs) sum += x;
  ms.mean = sum / xs.size();
  double sq = 0.0;
  for (double x : xs) sq += (x - ms.mean) * (x - ms.mean);
  ms.stddev = std::sqrt(sq / xs.size());
  return ms;
}

CorpusStats corpus_stats(const std::vector<Instance>& instances,
                         const std::vector<std::string>& posts) {
  if (instances.empty()) throw data_error("corpus_stats: no instances");

  CorpusStats s;
  s.instance_count = static_cast<int>(instances.size());
  s.post_count = static_cast<int>(posts.size());

  std::vector<double> args_pp, toks_pp;
  for (const auto& p : posts) {
    args_pp.push_back(static_cast<double>(split_sentences(p).size()));
    toks_pp.push_back(static_cast<double>(tokenize(p).size()));
  }
  s.args_per_post = mean_std(args_pp);
  s.tokens_per_post = mean_std(toks_pp);

  std::vector<double> q_toks, pos_toks, neg_toks;
  std::map<std::string, int> pair_counts;
  for (const auto& inst : instances) {
    q_toks.push_back(static_cast<double>(inst.quotation.token_count()));
    for (const auto& r : inst.replies)
      (r.positive ? pos_toks : neg_toks)
          .push_back(static_cast<double>(r.arg.token_count()));
    size_t cut = inst.id.rfind('#');
    std::string key = cut == std::string::npos ? inst.id : inst.id.substr(0, cut);
    ++pair_counts[key];
  }
  s.tokens_per_quotation = mean_std(q_toks);
  s.tokens_per_positive = mean_std(pos_toks);
  s.tokens_per_negative = mean_std(neg_toks);

  std::vector<double> pair_values;
  for (auto& [_, n] : pair_counts) {
    pair_values.push_back(static_cast<double>(n));
    s.max_pairs_per_post_pair = std::max(s.max_pairs_per_post_pair, n);
  }
  s.pairs_per_post_pair = mean_std(pair_values);
  return s;
}

std::string stats_to_csv(const CorpusStats& s) {
  std::ostringstream os;
  os << "statistic,mean,std\n";
  auto row = [&](const char* name, const MeanStd& ms) {
    os << name << ',' << ms.mean << ',' << ms.stddev << "\n";
  };
  row("args_per_post", s.args_per_post);
  row("tokens_per_post", s.tokens_per_post);
  row("tokens_per_quotation", s.tokens_per_quotation);
  row("tokens_per_positive_reply", s.tokens_per_positive);
  row("tokens_per_negative_reply", s.tokens_per_negative);
  row("pairs_per_post_pair", s.pairs_per_post_pair);
  os << "max_pairs_per_post_pair," << s.max_pairs_per_post_pair << ",\n";
  os << "instances," << s.instance_count << ",\n";
  os << "posts," << s.post_count << ",\n";
  return os.str();
}

void write_stats_csv(const std::string& path, const CorpusStats& stats) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write stats: " + path);
  out << stats_to_csv(stats);
}

}  // namespace argpair::corpus
