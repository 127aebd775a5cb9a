#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "povshift/candidates.hpp"
#include "povshift/preprocess.hpp"
#include "test_support.hpp"

using namespace povshift;

namespace {

std::set<std::string> texts(const std::vector<Candidate>& cands) {
  std::set<std::string> out;
  for (const Candidate& c : cands) out.insert(c.text);
  return out;
}

const Candidate* find_text(const std::vector<Candidate>& cands, const std::string& text) {
  for (const Candidate& c : cands)
    if (c.text == text) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("focus candidates match the annotated expectation") {
  LoadedDocument loaded = povtest::load_flynn();
  PipelineConfig cfg = povtest::flynn_config();
  const CorefChain* focus = loaded.doc.chain_by_id(2);
  REQUIRE(focus != nullptr);

  std::vector<Candidate> cands = build_focus_candidates(loaded.doc, loaded.deps, *focus, cfg.spec,
                                                        cfg.relational, cfg.rules);

  auto gold_it = loaded.gold.candidates.find(2);
  REQUIRE(gold_it != loaded.gold.candidates.end());
  std::set<std::string> expected(gold_it->second.begin(), gold_it->second.end());
  REQUIRE(expected.size() == 15);
  CHECK(texts(cands) == expected);

  // Name possessives fill possessive slots only; plain names never do.
  const Candidate* poss = find_text(cands, "Nick's");
  REQUIRE(poss != nullptr);
  CHECK(poss->kind == CandidateKind::proper_np);
  CHECK(poss->cases == std::vector<CaseClass>{CaseClass::possessive});
  const Candidate* name = find_text(cands, "Nick Flynn");
  REQUIRE(name != nullptr);
  CHECK(!name->fits(CaseClass::possessive));

  // Kinship converses pick the possessor pronoun from the related noun.
  const Candidate* father_side = find_text(cands, "his son");
  const Candidate* mother_side = find_text(cands, "her son");
  REQUIRE(father_side != nullptr);
  REQUIRE(mother_side != nullptr);
  CHECK(father_side->source == "relational");
  CHECK(father_side->kind == CandidateKind::common_np);
  CHECK(find_text(cands, "his grandson") != nullptr);
  CHECK(find_text(cands, "his brother") != nullptr);
  CHECK(find_text(cands, "her brother") == nullptr);

  // The emphatic pronoun is included alongside the plain inventory.
  CHECK(find_text(cands, "he himself") != nullptr);
  CHECK(find_text(cands, "himself") != nullptr);
}

TEST_CASE("focus candidates require a known gender") {
  LoadedDocument loaded = povtest::load_flynn();
  PipelineConfig cfg = povtest::flynn_config();
  cfg.spec.gender = Gender::unknown;
  const CorefChain* focus = loaded.doc.chain_by_id(2);
  CHECK_THROWS_AS(build_focus_candidates(loaded.doc, loaded.deps, *focus, cfg.spec,
                                         cfg.relational, cfg.rules),
                  std::invalid_argument);
}

TEST_CASE("singular confounders contribute their mention strings") {
  LoadedDocument loaded = povtest::load_flynn();
  const CorefChain* phil = loaded.doc.chain_by_id(1);
  REQUIRE(phil != nullptr);
  std::vector<Candidate> cands = build_confounder_candidates(*phil, Gender::masculine);
  CHECK(texts(cands) == std::set<std::string>{"Phil", "his"});

  auto gold_it = loaded.gold.candidates.find(1);
  REQUIRE(gold_it != loaded.gold.candidates.end());
  CHECK(texts(cands) ==
        std::set<std::string>(gold_it->second.begin(), gold_it->second.end()));
}

TEST_CASE("plural deictic confounders get plural pronouns and rewrites") {
  CorefChain chain;
  chain.id = 7;
  chain.pov = Person::first;
  chain.number = Number::plural;
  Mention coord;
  coord.text = "Mandy and me";
  chain.mentions.push_back(coord);
  Mention we;
  we.text = "we";
  chain.mentions.push_back(we);

  std::vector<Candidate> cands = build_confounder_candidates(chain, Gender::masculine);
  std::set<std::string> got = texts(cands);
  CHECK(got.count("they") == 1);
  CHECK(got.count("them") == 1);
  CHECK(got.count("their") == 1);
  CHECK(got.count("theirs") == 1);
  CHECK(got.count("themselves") == 1);
  CHECK(got.count("Mandy and him") == 1);
  // The raw deictic strings never survive.
  CHECK(got.count("we") == 0);
  CHECK(got.count("Mandy and me") == 0);

  // A feminine focus rewrites the conjunct with "her".
  std::set<std::string> fem = texts(build_confounder_candidates(chain, Gender::feminine));
  CHECK(fem.count("Mandy and her") == 1);
}

TEST_CASE("case narrowing keeps only compatible strings") {
  LoadedDocument loaded = povtest::load_flynn();
  PipelineConfig cfg = povtest::flynn_config();
  const CorefChain* focus = loaded.doc.chain_by_id(2);
  std::vector<Candidate> cands = build_focus_candidates(loaded.doc, loaded.deps, *focus, cfg.spec,
                                                        cfg.relational, cfg.rules);

  std::set<std::string> for_possessive = texts(narrow_by_case(cands, CaseClass::possessive));
  CHECK(for_possessive == std::set<std::string>{"Flynn's", "Nick Flynn's", "Nick's", "his"});

  std::set<std::string> for_nominative = texts(narrow_by_case(cands, CaseClass::nominative));
  CHECK(for_nominative == std::set<std::string>{"Nick Flynn", "Nick", "Flynn", "he", "he himself",
                                                "his son", "her son", "his brother",
                                                "his grandson"});

  std::set<std::string> for_accusative = texts(narrow_by_case(cands, CaseClass::accusative));
  CHECK(for_accusative.count("him") == 1);
  CHECK(for_accusative.count("he") == 0);
  CHECK(for_accusative.count("Nick") == 1);
  CHECK(for_accusative.count("Nick's") == 0);

  std::set<std::string> for_reflexive = texts(narrow_by_case(cands, CaseClass::reflexive));
  CHECK(for_reflexive == std::set<std::string>{"himself"});

  // Non-pronominal originals keep the whole set.
  CHECK(narrow_by_case(cands, CaseClass::non_pronominal).size() == cands.size());
}

TEST_CASE("narrowing falls back to the full set when nothing fits") {
  std::vector<Candidate> cands = {classify_string("Phil")};
  bool fell_back = false;
  std::vector<Candidate> out = narrow_by_case(cands, CaseClass::reflexive, &fell_back);
  CHECK(fell_back);
  CHECK(out.size() == 1);
  CHECK(out[0].text == "Phil");

  fell_back = true;
  out = narrow_by_case(cands, CaseClass::nominative, &fell_back);
  CHECK(!fell_back);
  CHECK(out.size() == 1);
}

TEST_CASE("strings classify by pronoun table, possessive shape, and casing") {
  Candidate he = classify_string("he");
  CHECK(he.kind == CandidateKind::pronoun);
  CHECK(he.cases == std::vector<CaseClass>{CaseClass::nominative});

  Candidate name = classify_string("Nick");
  CHECK(name.kind == CandidateKind::proper_np);
  CHECK(name.fits(CaseClass::nominative));
  CHECK(name.fits(CaseClass::accusative));

  Candidate poss = classify_string("Nick's");
  CHECK(poss.cases == std::vector<CaseClass>{CaseClass::possessive});

  Candidate np = classify_string("the old man");
  CHECK(np.kind == CandidateKind::common_np);
  CHECK(np.fits(CaseClass::accusative));
}

TEST_CASE("canonical order is names, pronouns, noun phrases") {
  std::vector<Candidate> cands = {
      classify_string("his son"),
      classify_string("he"),
      classify_string("Nick"),
      classify_string("Flynn"),
      classify_string("him"),
  };
  canonicalize(cands);
  std::vector<std::string> order;
  for (const Candidate& c : cands) order.push_back(c.text);
  CHECK(order == std::vector<std::string>{"Flynn", "Nick", "he", "him", "his son"});
}

TEST_CASE("canonicalize merges duplicate strings and unions their cases") {
  std::vector<Candidate> cands = {
      {"his", CandidateKind::pronoun, {CaseClass::possessive}, "pronoun"},
      {"his", CandidateKind::pronoun, {CaseClass::accusative}, "chain_string"},
  };
  canonicalize(cands);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].fits(CaseClass::possessive));
  CHECK(cands[0].fits(CaseClass::accusative));
}

TEST_CASE("relational lexicon parses tsv and reports malformed lines") {
  RelationalLexicon lex = RelationalLexicon::parse("father\tson\tdaughter\n");
  CHECK(lex.size() == 1);
  const RelationalLexicon::Entry* e = lex.lookup("father");
  REQUIRE(e != nullptr);
  CHECK(e->masculine_converse == "son");
  CHECK(e->feminine_converse == "daughter");
  CHECK(lex.lookup("uncle") == nullptr);

  CHECK_THROWS_WITH_AS(RelationalLexicon::parse("father\tson\n"), doctest::Contains("line 1"),
                       std::runtime_error);
}

TEST_CASE("shipped relational table covers the memoir kin terms") {
  RelationalLexicon lex = RelationalLexicon::load(povtest::data_path("relational_nouns.tsv"));
  const RelationalLexicon::Entry* father = lex.lookup("father");
  REQUIRE(father != nullptr);
  CHECK(father->masculine_converse == "son");
  const RelationalLexicon::Entry* grandfather = lex.lookup("grandfather");
  REQUIRE(grandfather != nullptr);
  CHECK(grandfather->masculine_converse == "grandson");
}
