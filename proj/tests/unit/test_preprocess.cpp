#include <string>
#include <vector>

#include "doctest.h"
#include "povshift/preprocess.hpp"
#include "test_support.hpp"

using namespace povshift;

namespace {

std::vector<Token> tokens_from(const std::vector<std::pair<std::string, std::string>>& words) {
  std::vector<Token> out;
  int offset = 0;
  for (const auto& [surface, pos] : words) {
    Token t;
    t.surface = surface;
    t.pos = pos;
    t.lemma = surface;
    t.char_start = offset;
    t.char_end = offset + static_cast<int>(surface.size());
    offset = t.char_end + 1;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_CASE("focus chain is the unique chain with the requested point of view") {
  LoadedDocument loaded = povtest::load_flynn();
  PipelineConfig cfg = povtest::flynn_config();
  CHECK(identify_focus_chain(loaded.doc, cfg.spec) == 2);
}

TEST_CASE("name evidence breaks point-of-view ties") {
  LoadedDocument loaded = povtest::load_flynn();

  // Two third-person chains (Phil, Emily); the name decides.
  EntitySpec phil;
  phil.full_name = "Phil";
  phil.given_name = "Phil";
  phil.from_pov = Person::third;
  phil.gender = Gender::masculine;
  CHECK(identify_focus_chain(loaded.doc, phil) == 1);

  EntitySpec emily = phil;
  emily.full_name = "Emily";
  emily.given_name = "Emily";
  emily.gender = Gender::feminine;
  CHECK(identify_focus_chain(loaded.doc, emily) == 3);
}

TEST_CASE("identification failures name the contenders") {
  LoadedDocument loaded = povtest::load_flynn();

  EntitySpec nameless;
  nameless.from_pov = Person::third;
  try {
    identify_focus_chain(loaded.doc, nameless);
    FAIL("expected an identification error");
  } catch (const IdentificationError& e) {
    CHECK(e.candidate_chains == std::vector<int>{1, 3});
    CHECK(std::string(e.what()).find("no focus name") != std::string::npos);
  }

  EntitySpec missing;
  missing.from_pov = Person::second;
  CHECK_THROWS_AS(identify_focus_chain(loaded.doc, missing), IdentificationError);
}

TEST_CASE("confounders split into singular and plural deictic sets") {
  LoadedDocument loaded = povtest::load_flynn();
  ConfounderSets sets = identify_confounders(loaded.doc, 2, Gender::masculine, Person::first);
  CHECK(sets.singular == std::vector<int>{1});
  CHECK(sets.plural_deictic.empty());

  // A feminine focus would not collide with Phil's "his".
  ConfounderSets fem = identify_confounders(loaded.doc, 2, Gender::feminine, Person::first);
  CHECK(fem.singular.empty());
}

TEST_CASE("plural chains sharing the narrator's person are flagged deictic") {
  Document doc;
  doc.doc_id = "t";
  doc.tokens = tokens_from({{"We", "PRP"}, {"left", "VBD"}, {".", "."}});
  doc.sentences = {TokenSpan{0, 2}};
  CorefChain we;
  we.id = 5;
  we.pov = Person::first;
  we.number = Number::plural;
  Mention m;
  m.span = TokenSpan{0, 0};
  m.text = "We";
  we.mentions = {m};
  doc.chains.push_back(we);

  ConfounderSets sets = identify_confounders(doc, 99, Gender::masculine, Person::first);
  CHECK(sets.plural_deictic == std::vector<int>{5});
  CHECK(sets.singular.empty());

  // The same chain is ignored when converting from a different point of view.
  ConfounderSets second = identify_confounders(doc, 99, Gender::masculine, Person::second);
  CHECK(second.plural_deictic.empty());
}

TEST_CASE("quoted pronouns do not make a chain a confounder") {
  Document doc;
  doc.doc_id = "t";
  doc.tokens = tokens_from({{"\"", "``"}, {"he", "PRP"}, {"left", "VBD"}, {"\"", "''"}});
  doc.sentences = {TokenSpan{0, 3}};
  doc.quoted_spans = {TokenSpan{1, 2}};
  CorefChain c;
  c.id = 4;
  c.pov = Person::third;
  c.number = Number::singular;
  Mention m;
  m.span = TokenSpan{1, 1};
  m.text = "he";
  m.in_quote = true;
  c.mentions = {m};
  doc.chains.push_back(c);

  ConfounderSets sets = identify_confounders(doc, 99, Gender::masculine, Person::first);
  CHECK(sets.singular.empty());
}

TEST_CASE("balanced quotes yield the inner spans") {
  auto tokens = tokens_from({{"\"", "``"},
                             {"Go", "VB"},
                             {"home", "NN"},
                             {"\"", "''"},
                             {"she", "PRP"},
                             {"said", "VBD"},
                             {".", "."}});
  std::vector<TokenSpan> sentences = {TokenSpan{0, 6}};
  std::vector<std::string> warnings;
  auto spans = detect_quoted_spans(tokens, sentences, &warnings);
  CHECK(spans == std::vector<TokenSpan>{TokenSpan{1, 2}});
  CHECK(warnings.empty());
}

TEST_CASE("ptb quote tokens pair like curly quotes") {
  auto tokens = tokens_from({{"``", "``"},
                             {"Stop", "VB"},
                             {"''", "''"},
                             {"he", "PRP"},
                             {"said", "VBD"},
                             {"``", "``"},
                             {"now", "RB"},
                             {"''", "''"}});
  std::vector<TokenSpan> sentences = {TokenSpan{0, 7}};
  auto spans = detect_quoted_spans(tokens, sentences);
  CHECK(spans == std::vector<TokenSpan>{TokenSpan{1, 1}, TokenSpan{6, 6}});
}

TEST_CASE("unbalanced quotes close at sentence boundaries with warnings") {
  auto opener = tokens_from({{"\"", "``"}, {"Run", "VB"}, {"now", "RB"}});
  std::vector<std::string> warnings;
  auto spans = detect_quoted_spans(opener, {TokenSpan{0, 2}}, &warnings);
  CHECK(spans == std::vector<TokenSpan>{TokenSpan{1, 2}});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("unbalanced") != std::string::npos);

  auto closer = tokens_from({{"done", "VBN"}, {"''", "''"}, {"he", "PRP"}, {"said", "VBD"}});
  warnings.clear();
  spans = detect_quoted_spans(closer, {TokenSpan{0, 3}}, &warnings);
  CHECK(spans == std::vector<TokenSpan>{TokenSpan{0, 0}});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("without opener") != std::string::npos);
}

TEST_CASE("narrator mentions are performative-verb subjects") {
  Document doc;
  doc.doc_id = "t";
  doc.tokens = tokens_from({{"I", "PRP"},
                            {"promise", "VBP"},
                            {".", "."},
                            {"I", "PRP"},
                            {"walked", "VBD"},
                            {".", "."}});
  doc.sentences = {TokenSpan{0, 2}, TokenSpan{3, 5}};
  CorefChain c;
  c.id = 0;
  c.pov = Person::first;
  Mention first;
  first.span = TokenSpan{0, 0};
  first.text = "I";
  Mention second;
  second.span = TokenSpan{3, 3};
  second.text = "I";
  c.mentions = {first, second};
  doc.chains.push_back(c);

  std::vector<DependencyArc> deps = {{1, 0, "nsubj"}, {4, 3, "nsubj"}};
  PerformativeLexicon lex = PerformativeLexicon::parse("promise\nswear\n");
  CHECK(lex.size() == 2);
  CHECK(lex.contains("promise"));
  CHECK(!lex.contains("walk"));

  auto flagged = detect_narrator_mentions(doc, deps, lex, DependencyRules::defaults());
  CHECK(flagged == std::vector<std::pair<int, int>>{{0, 0}});
  CHECK(doc.chains[0].mentions[0].narrator);
  CHECK(!doc.chains[0].mentions[1].narrator);
}

TEST_CASE("grammatical roles come from dependency labels") {
  LoadedDocument loaded = povtest::load_flynn();
  DependencyRules rules = DependencyRules::defaults();
  CHECK(role_from_deps(loaded.deps, TokenSpan{33, 33}, rules) == GrammaticalRole::subject);
  CHECK(role_from_deps(loaded.deps, TokenSpan{54, 54}, rules) == GrammaticalRole::object);
  CHECK(role_from_deps(loaded.deps, TokenSpan{0, 0}, rules) == GrammaticalRole::other);
}

TEST_CASE("gold adapters reproduce the stored annotations") {
  LoadedDocument loaded = povtest::load_flynn();
  AnnotationAdapters adapters = make_gold_adapters(loaded);
  CHECK(adapters.coref->version() == "gold-v1");

  std::vector<std::string> warnings;
  LoadedDocument redone = annotate(loaded.doc.source_text, adapters, &warnings);
  CHECK(redone.doc.tokens.size() == loaded.doc.tokens.size());
  CHECK(redone.doc.sentences == loaded.doc.sentences);
  REQUIRE(redone.doc.chains.size() == loaded.doc.chains.size());
  for (size_t i = 0; i < redone.doc.chains.size(); ++i) {
    CHECK(redone.doc.chains[i].id == loaded.doc.chains[i].id);
    CHECK(redone.doc.chains[i].mentions.size() == loaded.doc.chains[i].mentions.size());
    CHECK(redone.doc.chains[i].pov == loaded.doc.chains[i].pov);
  }
  CHECK(validate_document(redone.doc).empty());
}
