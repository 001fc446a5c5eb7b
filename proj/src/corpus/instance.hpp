#pragma once

#include <string>
#include <vector>

#include "corpus/vocabulary.hpp"

namespace argpair::corpus {

// Token-count bounds on quotations and replies.
constexpr int kMinArgTokens = 7;
constexpr int kMaxArgTokens = 45;

struct Argument {
  std::string text;
  std::vector<int> ids;  // filled by encode_instance

  int token_count() const;
};

struct Reply {
  Argument arg;
  std::vector<Argument> context;
  bool positive = false;
};

// One ranking problem: a quotation, its post context, one positive reply and
// u sampled negatives, each reply carrying its own post context. Replies are
// stored positive-first; that index order breaks score ties.
struct Instance {
  std::string id;
  Argument quotation;
  std::vector<Argument> quotation_context;
  std::vector<Reply> replies;

  const Reply& positive() const { return replies.at(0); }
  int negative_count() const { return static_cast<int>(replies.size()) - 1; }
};

// Throws a data error describing the first violated invariant.
void validate_instance(const Instance& inst, int expected_negatives = 4);
void validate_dataset(const std::vector<Instance>& instances, int expected_negatives = 4);

// Out-of-vocabulary tokens map to UNK; arguments truncate to max_arg_tokens,
// contexts to max_context_args. Errors when a quotation or reply tokenizes to
// nothing; empty context arguments are dropped.
void encode_instance(Instance& inst, const Vocabulary& vocab, int max_context_args,
                     int max_arg_tokens);

// Line-delimited dataset records:
//   {"id":..., "quotation":{"text":...,"context":[...]},
//    "replies":[{"text":...,"label":0|1,"context":[...]}]}
void write_dataset_jsonl(const std::string& path, const std::vector<Instance>& instances);
std::vector<Instance> read_dataset_jsonl(const std::string& path);

}  // namespace argpair::corpus
