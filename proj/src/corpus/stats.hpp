#pragma once

#include <string>
#include <vector>

#include "corpus/instance.hpp"

namespace argpair::corpus {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

MeanStd mean_std(const std::vector<double>& xs);

struct CorpusStats {
  MeanStd args_per_post;
  MeanStd tokens_per_post;
  MeanStd tokens_per_quotation;
  MeanStd tokens_per_positive;
  MeanStd tokens_per_negative;
  MeanStd pairs_per_post_pair;
  int max_pairs_per_post_pair = 0;
  int instance_count = 0;
  int post_count = 0;
};

// Post-level rows come from `posts` (may be empty when only a dataset file is
// available); argument-level rows come from the instances. Pair counts group
// instances by id prefix (everything before the last '#').
CorpusStats corpus_stats(const std::vector<Instance>& instances,
                         const std::vector<std::string>& posts);

void write_stats_csv(const std::string& path, const CorpusStats& stats);
std::string stats_to_csv(const CorpusStats& stats);

}  // namespace argpair::corpus
