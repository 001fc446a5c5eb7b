#include "corpus/extract.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "corpus/text.hpp"

namespace argpair::corpus {

using nlohmann::json;

std::vector<Thread> read_threads_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open threads file: " + path);
  std::vector<Thread> threads;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded())
      throw data_error("threads " + path + ": bad JSON on line " + std::to_string(line_no));
    Thread t;
    t.thread_id = rec.value("thread_id", "t" + std::to_string(line_no));
    t.original_post = rec.at("original_post").get<std::string>();
    for (const auto& r : rec.value("replies", json::array()))
      t.replies.push_back(r.get<std::string>());
    threads.push_back(std::move(t));
  }
  return threads;
}

void write_threads_jsonl(const std::string& path, const std::vector<Thread>& threads) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write threads file: " + path);
  for (const auto& t : threads) {
    json rec;
    rec["thread_id"] = t.thread_id;
    rec["original_post"] = t.original_post;
    rec["replies"] = t.replies;
    out << rec.dump() << "\n";
  }
}

namespace {

// Strips a leading quote marker; returns true when the line carries one.
bool strip_quote_marker(const std::string& line, std::string* quoted) {
  size_t i = line.find_first_not_of(" \t");
  if (i == std::string::npos) return false;
  if (line[i] == '>') {
    *quoted = line.substr(i + 1);
    return true;
  }
  if (line.compare(i, 4, "&gt;") == 0) {
    *quoted = line.substr(i + 4);
    return true;
  }
  return false;
}

struct CandidatePair {
  std::string quotation;
  std::string reply;
};

struct ParsedPost {
  std::vector<CandidatePair> pairs;       // marker order
  std::vector<std::string> context;       // sentences of non-quote lines
};

ParsedPost parse_reply_post(const std::string& post) {
  ParsedPost parsed;
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : post) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    lines.push_back(cur);
  }

  std::string body;  // everything outside quote lines
  size_t i = 0;
  while (i < lines.size()) {
    std::string quoted;
    if (strip_quote_marker(lines[i], &quoted)) {
      // consecutive quote lines form one quoted span
      std::string span = quoted;
      ++i;
      while (i < lines.size() && strip_quote_marker(lines[i], &quoted)) {
        span += " " + quoted;
        ++i;
      }
      // tail: the non-quote text up to the next quote group
      std::string tail;
      size_t j = i;
      std::string ignored;
      while (j < lines.size() && !strip_quote_marker(lines[j], &ignored)) {
        tail += lines[j] + "\n";
        ++j;
      }

      auto span_sentences = split_sentences(span);
      if (span_sentences.size() == 1) {  // quotations spanning several arguments are skipped
        auto tail_sentences = split_sentences(tail);
        if (!tail_sentences.empty())
          parsed.pairs.push_back({span_sentences[0], tail_sentences[0]});
      }
    } else {
      body += lines[i] + "\n";
      ++i;
    }
  }
  parsed.context = split_sentences(body);
  return parsed;
}

bool length_ok(const std::string& text) {
  int n = static_cast<int>(tokenize(text).size());
  return n >= kMinArgTokens && n <= kMaxArgTokens;
}

}  // namespace

std::vector<Instance> extract_instances(const std::vector<Thread>& threads,
                                        int negatives_per_instance, uint64_t seed) {
  if (negatives_per_instance < 1)
    throw config_error("negatives_per_instance must be >= 1");

  std::vector<Instance> out;
  Rng base(seed);

  for (const auto& thread : threads) {
    std::vector<ParsedPost> posts;
    posts.reserve(thread.replies.size());
    for (const auto& r : thread.replies) posts.push_back(parse_reply_post(r));

    auto op_sentences = split_sentences(thread.original_post);

    // negative pool: length-filtered reply sentences with their source post
    struct PoolEntry {
      int post;
      const CandidatePair* pair;
    };
    std::vector<PoolEntry> pool;
    for (size_t p = 0; p < posts.size(); ++p)
      for (const auto& pair : posts[p].pairs)
        if (length_ok(pair.reply)) pool.push_back({static_cast<int>(p), &pair});

    for (size_t p = 0; p < posts.size(); ++p) {
      int pair_idx = 0;
      for (const auto& pair : posts[p].pairs) {
        std::string id = thread.thread_id + "#" + std::to_string(p) + "#" +
                         std::to_string(pair_idx++);
        if (!length_ok(pair.quotation) || !length_ok(pair.reply)) continue;

        std::vector<int> candidates;
        for (size_t e = 0; e < pool.size(); ++e)
          if (pool[e].post != static_cast<int>(p)) candidates.push_back(static_cast<int>(e));
        if (static_cast<int>(candidates.size()) < negatives_per_instance) continue;

        // seeded per instance id, so other threads never shift the draws
        Rng rng = base.stream(id);
        for (int k = 0; k < negatives_per_instance; ++k) {
          int j = k + rng.uniform_int(static_cast<int>(candidates.size()) - k);
          std::swap(candidates[k], candidates[j]);
        }

        Instance inst;
        inst.id = id;
        inst.quotation.text = pair.quotation;
        std::string q_norm = normalize(pair.quotation);
        for (const auto& s : op_sentences) inst.quotation_context.push_back({s, {}});

        auto make_reply = [&](const std::string& text, int post_idx, bool positive) {
          Reply r;
          r.arg.text = text;
          r.positive = positive;
          for (const auto& s : posts[post_idx].context)
            if (normalize(s) != q_norm) r.context.push_back({s, {}});
          return r;
        };

        inst.replies.push_back(make_reply(pair.reply, static_cast<int>(p), true));
        for (int k = 0; k < negatives_per_instance; ++k) {
          const PoolEntry& e = pool[candidates[k]];
          inst.replies.push_back(make_reply(e.pair->reply, e.post, false));
        }
        out.push_back(std::move(inst));
      }
    }
  }
  return out;
}

}  // namespace argpair::corpus
