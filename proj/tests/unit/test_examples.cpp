#include <algorithm>
#include <set>

#include "doctest.h"
#include "povshift/conll.hpp"
#include "povshift/examples.hpp"
#include "povshift/lexicon.hpp"
#include "povshift/synth.hpp"
#include "test_support.hpp"

using namespace povshift;

namespace {

Document clean_mini_doc() {
  auto docs = load_conll_file(povtest::fixture_path("mini.v4_gold_conll"));
  return docs[0].doc;
}

// Unique strings over the chain's out-of-quote mentions, in first-seen order.
std::vector<std::string> brute_force_strings(const Document& doc, int chain_id) {
  std::vector<std::string> out;
  const CorefChain* chain = doc.chain_by_id(chain_id);
  for (const Mention& m : chain->mentions) {
    if (m.in_quote) continue;
    if (std::find(out.begin(), out.end(), m.text) == out.end()) out.push_back(m.text);
  }
  return out;
}

}  // namespace

TEST_CASE("chain examples carry the observed strings as gold") {
  Document doc = clean_mini_doc();
  WindowConfig wc{8, 3};
  auto examples = extract_chain_examples(doc, 0, wc);
  REQUIRE(examples.size() == 3);
  CHECK(examples[0].gold == "Sarah Miller");
  CHECK(examples[1].gold == "She");
  CHECK(examples[2].gold == "her");
  for (const auto& e : examples) {
    CHECK(e.doc_id == doc.doc_id);
    CHECK(e.chain_id == 0);
    CHECK(e.left_tokens.size() == 8);
    CHECK(e.right_tokens.size() == 8);
    CHECK(e.left_mentions.size() == 3);
    CHECK(e.right_mentions.size() == 3);
  }
  CHECK(examples[0].mention_index == 0);
  CHECK(examples[2].mention_index == 2);
}

TEST_CASE("candidate sets equal the brute-force unique strings") {
  Document doc = clean_mini_doc();
  WindowConfig wc{10, 4};
  for (int chain_id : {0, 1}) {
    auto examples = extract_chain_examples(doc, chain_id, wc);
    auto expected = brute_force_strings(doc, chain_id);
    for (const auto& e : examples) {
      std::set<std::string> got;
      for (const Candidate& c : e.candidates) got.insert(c.text);
      CHECK(got == std::set<std::string>(expected.begin(), expected.end()));
      CHECK(got.count(e.gold) == 1);
    }
  }
}

TEST_CASE("later same-chain mentions appear unresolved on the right") {
  Document doc = clean_mini_doc();
  auto examples = extract_chain_examples(doc, 0, WindowConfig{8, 3});
  // At the first mention the nearest right mentions are She, Tom, Tom; only
  // the own-chain "She" is still unselected, so exactly one shows as unknown.
  int unresolved = 0;
  for (const ExampleMention& m : examples[0].right_mentions)
    if (!m.tokens.empty() && m.tokens[0] == kUnkToken) {
      ++unresolved;
      CHECK(!m.resolved);
    }
  CHECK(unresolved == 1);
  // At the last mention, everything on the left is resolved.
  for (const ExampleMention& m : examples[2].left_mentions)
    if (!m.tokens.empty() && m.tokens[0] != kPadToken) CHECK(m.resolved);
}

TEST_CASE("selection history tracks earlier strings") {
  Document doc = clean_mini_doc();
  auto examples = extract_chain_examples(doc, 0, WindowConfig{8, 3});
  CHECK(examples[0].prior_strings.empty());
  CHECK(examples[1].prior_strings == std::vector<std::string>{"Sarah Miller"});
  CHECK(examples[2].prior_strings == std::vector<std::string>{"Sarah Miller", "She"});
  CHECK(examples[2].previous_string == "She");
}

TEST_CASE("document extraction covers every third-person person chain") {
  Document doc = clean_mini_doc();
  auto examples = extract_document_examples(doc, WindowConfig{8, 3});
  CHECK(examples.size() == 5);
  std::set<int> chains;
  for (const auto& e : examples) chains.insert(e.chain_id);
  CHECK(chains == std::set<int>{0, 1});
}

TEST_CASE("jsonl round trip preserves examples exactly") {
  Document doc = clean_mini_doc();
  auto examples = extract_document_examples(doc, WindowConfig{8, 3});
  REQUIRE(!examples.empty());
  std::string jsonl = examples_to_jsonl(examples);
  auto parsed = parse_examples_jsonl(jsonl);
  REQUIRE(parsed.size() == examples.size());
  for (size_t i = 0; i < examples.size(); ++i) CHECK(parsed[i] == examples[i]);
  // Serialization is stable: a second pass produces identical bytes.
  CHECK(examples_to_jsonl(parsed) == jsonl);
}

TEST_CASE("gold membership holds across a generated corpus") {
  SynthConfig cfg;
  cfg.n_docs = 6;
  cfg.seed = 21;
  auto corpus = generate_corpus(cfg);
  int checked = 0;
  for (const Document& doc : corpus) {
    auto examples = extract_document_examples(doc, WindowConfig{10, 4});
    for (const auto& e : examples) {
      bool found = false;
      for (const Candidate& c : e.candidates)
        if (c.text == e.gold) found = true;
      CHECK(found);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("malformed jsonl lines report their position") {
  CHECK_THROWS_WITH_AS(parse_examples_jsonl("{\"nope\""), doctest::Contains("line 1"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_examples_jsonl("{}\n{\"nope\""), doctest::Contains("line 2"),
                       std::runtime_error);
}
