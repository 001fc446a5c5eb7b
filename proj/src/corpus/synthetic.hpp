#pragma once

#include <cstdint>

#include "corpus/instance.hpp"

namespace argpair::corpus {

struct SyntheticCorpus {
  std::vector<Instance> instances;
  Vocabulary vocab;
};

// Desk-scale fixture corpus: each instance draws its quotation and positive
// reply from one keyword family (the reply repeats three of the quotation's
// keywords) and its negatives from other families, so both a token-overlap
// oracle and a trained model can rank it nearly perfectly. Deterministic
// under seed. `templates` selects how many keyword families are in play.
SyntheticCorpus generate_synthetic(int templates, int instances, uint64_t seed);

}  // namespace argpair::corpus
