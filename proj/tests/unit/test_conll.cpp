#include <algorithm>

#include "doctest.h"
#include "povshift/conll.hpp"
#include "test_support.hpp"

using namespace povshift;

TEST_CASE("mini corpus parses into two documents") {
  auto docs = load_conll_file(povtest::fixture_path("mini.v4_gold_conll"));
  REQUIRE(docs.size() == 2);

  const Document& clean = docs[0].doc;
  CHECK(clean.doc_id == "fic/mini/clean");
  CHECK(clean.genre == "fic");
  CHECK(clean.tokens.size() == 15);
  REQUIRE(clean.sentences.size() == 3);
  CHECK(clean.sentences[0] == TokenSpan{0, 5});
  CHECK(clean.sentences[1] == TokenSpan{6, 10});
  CHECK(clean.sentences[2] == TokenSpan{11, 14});
  CHECK(clean.span_text(TokenSpan{0, 1}) == "Sarah Miller");

  REQUIRE(clean.chains.size() == 2);
  const CorefChain* sarah = clean.chain_by_id(0);
  const CorefChain* tom = clean.chain_by_id(1);
  REQUIRE(sarah != nullptr);
  REQUIRE(tom != nullptr);
  REQUIRE(sarah->mentions.size() == 3);
  CHECK(sarah->mentions[0].text == "Sarah Miller");
  CHECK(sarah->mentions[1].text == "She");
  CHECK(sarah->mentions[2].text == "her");
  CHECK(sarah->kind == EntityKind::person);
  CHECK(sarah->pov == Person::third);
  CHECK(sarah->gender == Gender::feminine);
  REQUIRE(tom->mentions.size() == 2);
  CHECK(tom->kind == EntityKind::person);

  // The named-entity column marks both PERSON spans.
  bool found_sarah_ne = false;
  for (const NerSpan& s : docs[0].ne_spans)
    if (s.label == "PERSON" && s.span == TokenSpan{0, 1}) found_sarah_ne = true;
  CHECK(found_sarah_ne);
}

TEST_CASE("emitted column format parses back to the same chains") {
  auto docs = load_conll_file(povtest::fixture_path("mini.v4_gold_conll"));
  std::string emitted = emit_conll(docs[0]);
  auto again = parse_conll(emitted, "emitted");
  REQUIRE(again.size() == 1);
  const Document& a = docs[0].doc;
  const Document& b = again[0].doc;
  REQUIRE(a.chains.size() == b.chains.size());
  for (size_t i = 0; i < a.chains.size(); ++i) {
    REQUIRE(a.chains[i].mentions.size() == b.chains[i].mentions.size());
    for (size_t j = 0; j < a.chains[i].mentions.size(); ++j) {
      CHECK(a.chains[i].mentions[j].span == b.chains[i].mentions[j].span);
      CHECK(a.chains[i].mentions[j].text == b.chains[i].mentions[j].text);
    }
  }
  CHECK(a.sentences == b.sentences);
}

TEST_CASE("deictic filtering drops narrators and is idempotent") {
  auto parsed = load_conll_file(povtest::fixture_path("mini.v4_gold_conll"));
  std::vector<Document> docs;
  for (auto& cd : parsed) docs.push_back(cd.doc);

  std::vector<Document> kept = filter_deictic_documents(docs);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].doc_id == "fic/mini/clean");

  std::vector<Document> again = filter_deictic_documents(kept);
  REQUIRE(again.size() == 1);
  CHECK(again[0].doc_id == kept[0].doc_id);
}

TEST_CASE("quoted deictic pronouns do not disqualify a document") {
  std::string text =
      "#begin document (test/quoted); part 000\n"
      "test/quoted\t0\t0\t``\t``\t*\t-\t-\t-\t-\t*\t-\n"
      "test/quoted\t0\t1\tI\tPRP\t*\t-\t-\t-\t-\t*\t(0)\n"
      "test/quoted\t0\t2\tagree\tVBP\t*\t-\t-\t-\t-\t*\t-\n"
      "test/quoted\t0\t3\t''\t''\t*\t-\t-\t-\t-\t*\t-\n"
      "test/quoted\t0\t4\tsaid\tVBD\t*\t-\t-\t-\t-\t*\t-\n"
      "test/quoted\t0\t5\tTom\tNNP\t*\t-\t-\t-\t-\t(PERSON)\t(1)\n"
      "test/quoted\t0\t6\t.\t.\t*\t-\t-\t-\t-\t*\t-\n"
      "\n"
      "#end document\n";
  auto docs = parse_conll(text, "inline");
  REQUIRE(docs.size() == 1);
  std::vector<Document> kept = filter_deictic_documents({docs[0].doc});
  CHECK(kept.size() == 1);
}

TEST_CASE("person chain selection and corpus statistics") {
  auto parsed = load_conll_file(povtest::fixture_path("mini.v4_gold_conll"));
  const Document& clean = parsed[0].doc;
  std::vector<int> person = select_person_chains(clean);
  std::vector<int> expected = {0, 1};
  CHECK(person == expected);

  CorpusStats stats = corpus_stats({clean});
  CHECK(stats.entities == 2);
  CHECK(stats.mentions == 5);
  CHECK(stats.mentions_per_entity == doctest::Approx(2.5));
  CHECK(stats.documents == 1);
  CHECK(stats.words == 15);

  std::string row = stats_csv_row("mini", stats);
  CHECK(row == "mini,2,5,2.50,1,15");
  CHECK(stats_csv_header() == "dataset,entities,mentions,men_per_ent,docs,words\n");
}

TEST_CASE("parse errors name the line") {
  std::string bad =
      "#begin document (test/bad); part 000\n"
      "test/bad\t0\t0\tword\tNN\t*\t-\t-\t-\t-\t*\t(0\n"
      "\n"
      "#end document\n";
  CHECK_THROWS_WITH_AS(parse_conll(bad, "bad.conll"),
                       doctest::Contains("bad.conll:3"), ConllParseError);

  std::string short_cols = "#begin document (t/x); part 000\nt/x 0 0 word\n#end document\n";
  CHECK_THROWS_WITH_AS(parse_conll(short_cols, "cols"), doctest::Contains("12 columns"),
                       ConllParseError);

  std::string no_block = "t/x\t0\t0\tw\tNN\t*\t-\t-\t-\t-\t*\t-\n";
  CHECK_THROWS_AS(parse_conll(no_block, "stray"), ConllParseError);
}

TEST_CASE("multi-part documents merge with offset chain ids") {
  std::string text =
      "#begin document (test/parts); part 000\n"
      "test/parts\t0\t0\tAnn\tNNP\t*\t-\t-\t-\t-\t(PERSON)\t(3)\n"
      "test/parts\t0\t1\tleft\tVBD\t*\t-\t-\t-\t-\t*\t-\n"
      "\n"
      "#end document\n"
      "#begin document (test/parts); part 001\n"
      "test/parts\t1\t0\tShe\tPRP\t*\t-\t-\t-\t-\t*\t(3)\n"
      "test/parts\t1\t1\treturned\tVBD\t*\t-\t-\t-\t-\t*\t-\n"
      "\n"
      "#end document\n";
  auto docs = parse_conll(text, "parts");
  REQUIRE(docs.size() == 1);
  const Document& doc = docs[0].doc;
  CHECK(doc.tokens.size() == 4);
  CHECK(doc.sentences.size() == 2);
  REQUIRE(doc.chains.size() == 2);
  CHECK(doc.chain_by_id(3) != nullptr);
  CHECK(doc.chain_by_id(1003) != nullptr);
}
