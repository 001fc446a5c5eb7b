#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corpus/instance.hpp"

namespace argpair::corpus {

struct Thread {
  std::string thread_id;
  std::string original_post;
  std::vector<std::string> replies;
};

// Line-delimited records {"thread_id":..., "original_post":..., "replies":[...]}.
std::vector<Thread> read_threads_jsonl(const std::string& path);
void write_threads_jsonl(const std::string& path, const std::vector<Thread>& threads);

// Mines quotation-reply pairs: a quote-marker line ('>' or '&gt;') whose
// quoted span is exactly one sentence yields the quotation, and the first
// sentence following the marker is the positive reply. Negatives are drawn
// uniformly (seeded per instance) from first-sentences-after-quotes in the
// thread's other reply posts, after the [7,45] token filter. Threads that
// yield no valid pair contribute nothing.
std::vector<Instance> extract_instances(const std::vector<Thread>& threads,
                                        int negatives_per_instance, uint64_t seed);

}  // namespace argpair::corpus
