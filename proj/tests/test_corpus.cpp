#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <set>

#include "common/error.hpp"
#include "corpus/extract.hpp"
#include "corpus/instance.hpp"
#include "corpus/stats.hpp"
#include "corpus/synthetic.hpp"
#include "corpus/text.hpp"
#include "corpus/vocabulary.hpp"

using namespace argpair;
using namespace argpair::corpus;

namespace {

// Thread fixture: post 0 quotes a full OP sentence and replies to it; posts
// 1..4 quote a six-token span (rejected by the length filter) but their
// replies still feed the negative pool.
Thread fixture_thread() {
  Thread t;
  t.thread_id = "t1";
  t.original_post =
      "The city should replace its diesel buses with electric ones next year. "
      "Five word quote here now. "
      "Bike lanes on main street would reduce traffic during rush hour. "
      "Free transit passes would help students get to class on time.";
  t.replies.push_back(
      "&gt; Bike lanes on main street would reduce traffic during rush hour.\n"
      "That claim ignores how narrow the street already is for deliveries. "
      "And another stray sentence follows here anyway.");
  const char* negatives[4] = {
      "Winter maintenance costs for separated lanes are higher than the city admits.",
      "Most commuters live too far away for cycling to be realistic.",
      "The budget already covers new traffic signals along the whole corridor.",
      "Electric buses would cut noise levels near the hospital district.",
  };
  for (const char* n : negatives)
    t.replies.push_back(std::string("&gt; Five word quote here now.\n") + n);
  return t;
}

}  // namespace

TEST_CASE("tokenizer lowercases and separates punctuation") {
  auto toks = tokenize("Don't Panic, okay?");
  REQUIRE(toks.size() == 5);
  CHECK(toks[0] == "don't");
  CHECK(toks[1] == "panic");
  CHECK(toks[2] == ",");
  CHECK(toks[3] == "okay");
  CHECK(toks[4] == "?");
}

TEST_CASE("sentence splitter handles terminators, abbreviations and newlines") {
  auto s = split_sentences("Dr. Smith disagrees. See e.g. the report! Why not?\nLast line");
  REQUIRE(s.size() == 4);
  CHECK(s[0] == "Dr. Smith disagrees.");
  CHECK(s[1] == "See e.g. the report!");
  CHECK(s[2] == "Why not?");
  CHECK(s[3] == "Last line");
}

TEST_CASE("vocabulary keeps tokens strictly above the threshold") {
  std::vector<std::string> docs;
  for (int i = 0; i < 20; ++i) docs.push_back("the");
  for (int i = 0; i < 3; ++i) docs.push_back("zyx");
  Vocabulary v = Vocabulary::build(docs, 15);
  CHECK(v.size() == 5);  // 4 reserved + "the"
  CHECK(v.contains("the"));
  CHECK(!v.contains("zyx"));
  CHECK(v.id_of("zyx") == Vocabulary::kUnk);

  // frequency exactly equal to the threshold is dropped
  std::vector<std::string> edge(15, "word");
  CHECK(!Vocabulary::build(edge, 15).contains("word"));
}

TEST_CASE("empty corpus yields the reserved-only vocabulary") {
  Vocabulary v = Vocabulary::build({}, 15);
  CHECK(v.size() == 4);
  CHECK(v.token_of(Vocabulary::kPad) == "<pad>");
  CHECK(v.token_of(Vocabulary::kUnk) == "<unk>");
  CHECK(v.token_of(Vocabulary::kBos) == "<bos>");
  CHECK(v.token_of(Vocabulary::kEos) == "<eos>");
}

TEST_CASE("encode/decode round-trips in-vocabulary text") {
  std::vector<std::string> docs = {"alpha beta gamma delta", "alpha beta gamma",
                                   "alpha beta", "alpha"};
  Vocabulary v = Vocabulary::build(docs, 0);
  std::string text = "Alpha, beta gamma!";
  // punctuation is out of vocabulary here
  Vocabulary v2 = Vocabulary::build({"alpha beta gamma , !"}, 0);
  auto ids = v2.encode(text);
  CHECK(v2.decode(ids) == normalize(text));
}

TEST_CASE("fixture thread yields exactly the hand-enumerated instance") {
  auto instances = extract_instances({fixture_thread()}, 4, 7);
  REQUIRE(instances.size() == 1);
  const Instance& inst = instances[0];

  CHECK(normalize(inst.quotation.text) ==
        normalize("Bike lanes on main street would reduce traffic during rush hour."));
  REQUIRE(inst.replies.size() == 5);
  CHECK(inst.replies[0].positive);
  CHECK(normalize(inst.replies[0].arg.text) ==
        normalize("That claim ignores how narrow the street already is for deliveries."));

  std::set<std::string> got, expected;
  for (int i = 1; i < 5; ++i) got.insert(normalize(inst.replies[i].arg.text));
  expected.insert(normalize(
      "Winter maintenance costs for separated lanes are higher than the city admits."));
  expected.insert(normalize("Most commuters live too far away for cycling to be realistic."));
  expected.insert(
      normalize("The budget already covers new traffic signals along the whole corridor."));
  expected.insert(normalize("Electric buses would cut noise levels near the hospital district."));
  CHECK(got == expected);

  // quotation context is the original post's sentence list
  CHECK(inst.quotation_context.size() == 4);
  // the reply's own post context keeps the reply but not the quote line
  REQUIRE(inst.replies[0].context.size() == 2);
  for (const auto& c : inst.replies[0].context)
    CHECK(normalize(c.text) != normalize(inst.quotation.text));

  validate_dataset(instances, 4);
}

TEST_CASE("quote spans of two sentences are skipped") {
  Thread t;
  t.thread_id = "t2";
  t.original_post = "Opening statement for this thread. Another opening line for it.";
  t.replies.push_back(
      "&gt; The first quoted sentence is here today. "
      "And a second quoted sentence follows now.\n"
      "A completely valid reply sentence with more than seven tokens.");
  // enough other posts to supply negatives if a pair were accepted
  for (int i = 0; i < 4; ++i)
    t.replies.push_back("&gt; Five word quote here now.\n"
                        "Yet another filler reply sentence number " +
                        std::to_string(i) + " that is long enough.");
  CHECK(extract_instances({t}, 4, 7).empty());
}

TEST_CASE("extraction is deterministic and seed moves only negatives") {
  // eight posts all quoting the same OP sentence with valid replies
  Thread t;
  t.thread_id = "big";
  t.original_post = "Remote work policies should become the default for most office jobs.";
  for (int i = 0; i < 8; ++i)
    t.replies.push_back(
        "&gt; Remote work policies should become the default for most office jobs.\n"
        "Distinct counter argument number " + std::to_string(i) +
        " with plenty of words to pass the filter.");

  auto a = extract_instances({t}, 4, 1);
  auto b = extract_instances({t}, 4, 1);
  auto c = extract_instances({t}, 4, 2);
  REQUIRE(a.size() == 8);
  REQUIRE(b.size() == 8);
  REQUIRE(c.size() == 8);

  bool negatives_moved = false;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].quotation.text == b[i].quotation.text);
    for (size_t r = 0; r < a[i].replies.size(); ++r)
      CHECK(a[i].replies[r].arg.text == b[i].replies[r].arg.text);

    CHECK(a[i].quotation.text == c[i].quotation.text);
    CHECK(a[i].replies[0].arg.text == c[i].replies[0].arg.text);
    for (size_t r = 1; r < a[i].replies.size(); ++r)
      if (a[i].replies[r].arg.text != c[i].replies[r].arg.text) negatives_moved = true;
  }
  CHECK(negatives_moved);
}

TEST_CASE("encode_instance maps OOV to UNK and truncates") {
  SyntheticCorpus syn = generate_synthetic(3, 5, 11);
  Instance inst = syn.instances[0];
  inst.quotation.text += " qqqzzz";  // unseen token
  encode_instance(inst, syn.vocab, 2, 5);
  CHECK(inst.quotation.ids.size() == 5);  // truncated to max_arg_tokens
  CHECK(inst.quotation_context.size() <= 2);

  Instance inst2 = syn.instances[1];
  inst2.quotation.text = "qqqzzz wwwxxx";
  encode_instance(inst2, syn.vocab, 40, 60);
  REQUIRE(inst2.quotation.ids.size() == 2);
  CHECK(inst2.quotation.ids[0] == Vocabulary::kUnk);
  CHECK(inst2.quotation.ids[1] == Vocabulary::kUnk);

  Instance inst3 = syn.instances[2];
  inst3.replies[0].arg.text = "";
  CHECK_THROWS_WITH_AS(encode_instance(inst3, syn.vocab, 40, 60),
                       doctest::Contains(inst3.id.c_str()), Error);
}

TEST_CASE("corpus_stats matches hand arithmetic on the two-post fixture") {
  auto instances = extract_instances({fixture_thread()}, 4, 7);
  std::vector<std::string> posts = {
      "One. Two. Three.",
      "One. Two. Three. Four. Five.",
  };
  CorpusStats s = corpus_stats(instances, posts);
  CHECK(s.args_per_post.mean == doctest::Approx(4.0));
  CHECK(s.args_per_post.stddev == doctest::Approx(1.0));
  CHECK(s.max_pairs_per_post_pair == 1);
  CHECK(s.pairs_per_post_pair.mean == doctest::Approx(1.0));

  CorpusStats single = corpus_stats(instances, {"Only. Post. Here."});
  CHECK(single.args_per_post.stddev == doctest::Approx(0.0));
  CHECK(single.tokens_per_post.stddev == doctest::Approx(0.0));

  CHECK_THROWS_AS(corpus_stats({}, posts), Error);
}

TEST_CASE("synthetic corpus is deterministic with four negatives each") {
  SyntheticCorpus a = generate_synthetic(5, 50, 7);
  SyntheticCorpus b = generate_synthetic(5, 50, 7);
  REQUIRE(a.instances.size() == 50);
  CHECK(a.vocab.size() == b.vocab.size());
  for (size_t i = 0; i < a.instances.size(); ++i) {
    CHECK(a.instances[i].quotation.text == b.instances[i].quotation.text);
    REQUIRE(a.instances[i].replies.size() == 5);
    CHECK(a.instances[i].negative_count() == 4);
    for (size_t r = 0; r < 5; ++r)
      CHECK(a.instances[i].replies[r].arg.text == b.instances[i].replies[r].arg.text);
  }
  validate_dataset(a.instances, 4);

  CHECK_THROWS_AS(generate_synthetic(1, 10, 7), Error);
}

TEST_CASE("token-overlap oracle reaches P@1 >= 0.9 on the synthetic corpus") {
  SyntheticCorpus syn = generate_synthetic(5, 50, 7);
  int correct = 0;
  for (const auto& inst : syn.instances) {
    auto toks = tokenize(inst.quotation.text);
    std::set<std::string> q_set(toks.begin(), toks.end());
    int best = -1, best_overlap = -1;
    for (size_t r = 0; r < inst.replies.size(); ++r) {
      auto rt = tokenize(inst.replies[r].arg.text);
      std::set<std::string> r_set(rt.begin(), rt.end());
      int overlap = 0;
      for (const auto& tok : r_set) overlap += q_set.count(tok) ? 1 : 0;
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = static_cast<int>(r);
      }
    }
    if (best == 0) ++correct;
  }
  CHECK(static_cast<double>(correct) / 50.0 >= 0.9);
}

TEST_CASE("dataset validation rejects invariant violations") {
  SyntheticCorpus syn = generate_synthetic(4, 6, 3);

  Instance short_q = syn.instances[0];
  short_q.quotation.text = "too few tokens here";
  CHECK_THROWS_AS(validate_instance(short_q, 4), Error);

  Instance two_pos = syn.instances[1];
  two_pos.replies[2].positive = true;
  CHECK_THROWS_AS(validate_instance(two_pos, 4), Error);

  Instance leak = syn.instances[2];
  leak.replies[3].context.push_back({leak.quotation.text, {}});
  CHECK_THROWS_AS(validate_instance(leak, 4), Error);

  Instance wrong_u = syn.instances[3];
  wrong_u.replies.pop_back();
  CHECK_THROWS_AS(validate_instance(wrong_u, 4), Error);
}

TEST_CASE("dataset and threads files round-trip through JSONL") {
  SyntheticCorpus syn = generate_synthetic(3, 8, 21);
  std::string path = "test_dataset_roundtrip.jsonl";
  write_dataset_jsonl(path, syn.instances);
  auto back = read_dataset_jsonl(path);
  REQUIRE(back.size() == syn.instances.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == syn.instances[i].id);
    CHECK(back[i].quotation.text == syn.instances[i].quotation.text);
    CHECK(back[i].replies.size() == syn.instances[i].replies.size());
    CHECK(back[i].replies[0].positive);
    CHECK(back[i].quotation_context.size() == syn.instances[i].quotation_context.size());
  }
  std::remove(path.c_str());

  Thread t = fixture_thread();
  write_threads_jsonl("test_threads_roundtrip.jsonl", {t});
  auto threads = read_threads_jsonl("test_threads_roundtrip.jsonl");
  REQUIRE(threads.size() == 1);
  CHECK(threads[0].thread_id == t.thread_id);
  CHECK(threads[0].original_post == t.original_post);
  CHECK(threads[0].replies == t.replies);
  std::remove("test_threads_roundtrip.jsonl");
}
