#include "corpus/instance.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "common/error.hpp"
#include "corpus/text.hpp"

namespace argpair::corpus {

using nlohmann::json;

int Argument::token_count() const { return static_cast<int>(tokenize(text).size()); }

void validate_instance(const Instance& inst, int expected_negatives) {
  auto fail = [&](const std::string& what) {
    throw data_error("instance " + inst.id + ": " + what);
  };

  if (inst.replies.empty() || !inst.replies[0].positive)
    fail("first reply must be the positive one");
  int positives = 0;
  for (const auto& r : inst.replies) positives += r.positive ? 1 : 0;
  if (positives != 1) fail("expected exactly one positive reply");
  if (inst.negative_count() != expected_negatives)
    fail("expected " + std::to_string(expected_negatives) + " negative replies, got " +
         std::to_string(inst.negative_count()));

  auto check_len = [&](const Argument& a, const std::string& role) {
    int n = a.token_count();
    if (n < kMinArgTokens || n > kMaxArgTokens)
      fail(role + " has " + std::to_string(n) + " tokens, outside [" +
           std::to_string(kMinArgTokens) + "," + std::to_string(kMaxArgTokens) + "]");
  };
  check_len(inst.quotation, "quotation");
  for (size_t i = 0; i < inst.replies.size(); ++i)
    check_len(inst.replies[i].arg, "reply " + std::to_string(i));

  std::string q_norm = normalize(inst.quotation.text);
  for (const auto& r : inst.replies)
    for (const auto& c : r.context)
      if (normalize(c.text) == q_norm) fail("quotation appears verbatim in a reply context");
}

void validate_dataset(const std::vector<Instance>& instances, int expected_negatives) {
  for (const auto& inst : instances) validate_instance(inst, expected_negatives);
}

namespace {

std::vector<int> encode_argument(const Argument& a, const Vocabulary& vocab, int max_tokens) {
  std::vector<int> ids = vocab.encode(a.text);
  if (static_cast<int>(ids.size()) > max_tokens) ids.resize(max_tokens);
  return ids;
}

void encode_context(std::vector<Argument>& ctx, const Vocabulary& vocab, int max_args,
                    int max_tokens) {
  std::vector<Argument> kept;
  for (auto& a : ctx) {
    a.ids = encode_argument(a, vocab, max_tokens);
    if (!a.ids.empty()) kept.push_back(std::move(a));
    if (static_cast<int>(kept.size()) >= max_args) break;
  }
  ctx = std::move(kept);
}

}  // namespace

void encode_instance(Instance& inst, const Vocabulary& vocab, int max_context_args,
                     int max_arg_tokens) {
  inst.quotation.ids = encode_argument(inst.quotation, vocab, max_arg_tokens);
  if (inst.quotation.ids.empty())
    throw data_error("instance " + inst.id + ": quotation encodes to no tokens");
  encode_context(inst.quotation_context, vocab, max_context_args, max_arg_tokens);

  for (size_t i = 0; i < inst.replies.size(); ++i) {
    Reply& r = inst.replies[i];
    r.arg.ids = encode_argument(r.arg, vocab, max_arg_tokens);
    if (r.arg.ids.empty())
      throw data_error("instance " + inst.id + ": reply " + std::to_string(i) +
                       " encodes to no tokens");
    encode_context(r.context, vocab, max_context_args, max_arg_tokens);
  }
}

void write_dataset_jsonl(const std::string& path, const std::vector<Instance>& instances) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write dataset: " + path);
  for (const auto& inst : instances) {
    json rec;
    rec["id"] = inst.id;
    rec["quotation"]["text"] = inst.quotation.text;
    auto ctx_array = [](const std::vector<Argument>& ctx) {
      json arr = json::array();
      for (const auto& a : ctx) arr.push_back(a.text);
      return arr;
    };
    rec["quotation"]["context"] = ctx_array(inst.quotation_context);
    rec["replies"] = json::array();
    for (const auto& r : inst.replies) {
      json jr;
      jr["text"] = r.arg.text;
      jr["label"] = r.positive ? 1 : 0;
      jr["context"] = ctx_array(r.context);
      rec["replies"].push_back(jr);
    }
    out << rec.dump() << "\n";
  }
}

std::vector<Instance> read_dataset_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset: " + path);

  std::vector<Instance> instances;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded())
      throw data_error("dataset " + path + ": bad JSON on line " + std::to_string(line_no));

    Instance inst;
    inst.id = rec.value("id", "line" + std::to_string(line_no));
    inst.quotation.text = rec.at("quotation").at("text").get<std::string>();
    for (const auto& c : rec.at("quotation").value("context", json::array()))
      inst.quotation_context.push_back({c.get<std::string>(), {}});

    std::vector<Reply> positives, negatives;
    for (const auto& jr : rec.at("replies")) {
      Reply r;
      r.arg.text = jr.at("text").get<std::string>();
      r.positive = jr.at("label").get<int>() == 1;
      for (const auto& c : jr.value("context", json::array()))
        r.context.push_back({c.get<std::string>(), {}});
      (r.positive ? positives : negatives).push_back(std::move(r));
    }
    if (positives.size() != 1)
      throw data_error("dataset " + path + ": record " + inst.id +
                       " must have exactly one label-1 reply");
    inst.replies.push_back(std::move(positives[0]));
    for (auto& r : negatives) inst.replies.push_back(std::move(r));
    instances.push_back(std::move(inst));
  }
  return instances;
}

}  // namespace argpair::corpus
