#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "povshift/morph.hpp"
#include "povshift/util.hpp"
#include "test_support.hpp"

using namespace povshift;

namespace {

struct ConjugationCase {
  std::string form;
  std::string lemma;
  std::string pos;
  std::string expected;
};

std::vector<ConjugationCase> load_cases() {
  std::vector<ConjugationCase> cases;
  std::string text = read_file(povtest::fixture_path("conjugation_cases.tsv"));
  for (const std::string& raw : split_char(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split_char(raw, '\t');
    REQUIRE(cols.size() == 4);
    cases.push_back({trim(cols[0]), trim(cols[1]), trim(cols[2]), trim(cols[3])});
  }
  return cases;
}

}  // namespace

TEST_CASE("pos tags map onto tense buckets") {
  CHECK(tense_from_pos("VBZ") == VerbTense::present);
  CHECK(tense_from_pos("VBP") == VerbTense::present);
  CHECK(tense_from_pos("VB") == VerbTense::present);
  CHECK(tense_from_pos("VBD") == VerbTense::past);
  CHECK(tense_from_pos("VBN") == VerbTense::past);
  CHECK(tense_from_pos("MD") == VerbTense::modal);

  CHECK(is_finite_verb_pos("VBZ"));
  CHECK(is_finite_verb_pos("VBP"));
  CHECK(is_finite_verb_pos("VBD"));
  CHECK(is_finite_verb_pos("MD"));
  CHECK(!is_finite_verb_pos("NN"));
  CHECK(!is_finite_verb_pos("VBG"));
}

TEST_CASE("conjugation table holds for every case") {
  VerbDictionary dict = VerbDictionary::load(povtest::data_path("verb_conjugations.tsv"));
  auto cases = load_cases();
  REQUIRE(cases.size() == 60);
  for (const auto& c : cases) {
    CAPTURE(c.form);
    ConjugationResult r = conjugate_third_singular(c.form, c.lemma, tense_from_pos(c.pos), dict);
    CHECK(r.form == c.expected);
  }
}

TEST_CASE("re-conjugating the output leaves it unchanged") {
  VerbDictionary dict = VerbDictionary::load(povtest::data_path("verb_conjugations.tsv"));
  for (const auto& c : load_cases()) {
    CAPTURE(c.form);
    VerbTense tense = tense_from_pos(c.pos);
    ConjugationResult first = conjugate_third_singular(c.form, c.lemma, tense, dict);
    ConjugationResult again = conjugate_third_singular(first.form, c.lemma, tense, dict);
    CHECK(again.form == first.form);
    CHECK(again.rule == "unchanged");
  }
}

TEST_CASE("suffix and fallback rules label themselves") {
  VerbDictionary empty;
  CHECK(conjugate_third_singular("watch", "", VerbTense::present, empty).rule == "suffix_es");
  CHECK(conjugate_third_singular("fix", "", VerbTense::present, empty).rule == "suffix_es");
  CHECK(conjugate_third_singular("try", "", VerbTense::present, empty).rule == "suffix_ies");
  CHECK(conjugate_third_singular("play", "", VerbTense::present, empty).rule == "suffix_s");
  CHECK(conjugate_third_singular("walk", "", VerbTense::present, empty).rule == "suffix_s");
  CHECK(conjugate_third_singular("am", "", VerbTense::present, empty).rule == "irregular");
  CHECK(conjugate_third_singular("were", "be", VerbTense::past, empty).rule == "irregular");
  CHECK(conjugate_third_singular("'m", "be", VerbTense::present, empty).rule == "contraction");
  CHECK(conjugate_third_singular("'ve", "have", VerbTense::present, empty).form == "'s");
  CHECK(conjugate_third_singular("'d", "", VerbTense::present, empty).rule == "unchanged");
  CHECK(conjugate_third_singular("can", "can", VerbTense::modal, empty).rule == "unchanged");
  CHECK(conjugate_third_singular("walked", "walk", VerbTense::past, empty).rule == "unchanged");
  CHECK(conjugate_third_singular("Drive", "drive", VerbTense::present, empty).form == "Drives");
}

TEST_CASE("dictionary lookup wins over suffix rules") {
  VerbDictionary dict = VerbDictionary::parse("go\tgo\tgoes\twent\n");
  ConjugationResult r = conjugate_third_singular("go", "go", VerbTense::present, dict);
  CHECK(r.form == "goes");
  CHECK(r.rule == "dictionary");
  CHECK(dict.size() == 1);
  CHECK(dict.lookup("go") != nullptr);
  CHECK(dict.lookup("missing") == nullptr);
}

TEST_CASE("malformed dictionary lines report their position") {
  CHECK_THROWS_WITH_AS(VerbDictionary::parse("go\tgo\tgoes\n"), doctest::Contains("line 1"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(VerbDictionary::parse("# header\ngo\tgo\n"), doctest::Contains("line 2"),
                       std::runtime_error);
}

TEST_CASE("agreement verbs come from focus subject arcs outside quotes") {
  LoadedDocument loaded = povtest::load_flynn();
  const CorefChain* focus = loaded.doc.chain_by_id(2);
  REQUIRE(focus != nullptr);
  DependencyRules rules = DependencyRules::defaults();
  std::vector<int> verbs = find_agreement_verbs(loaded.doc, loaded.deps, *focus, rules);
  CHECK(verbs == std::vector<int>{34});

  // Verbs whose subject belongs to some other chain stay untouched.
  const CorefChain* phil = loaded.doc.chain_by_id(1);
  REQUIRE(phil != nullptr);
  std::vector<int> phil_verbs = find_agreement_verbs(loaded.doc, loaded.deps, *phil, rules);
  CHECK(phil_verbs == std::vector<int>{25});
}

TEST_CASE("verb edits carry spans and skip unchanged forms") {
  Document doc = povtest::load_flynn().doc;
  VerbDictionary dict = VerbDictionary::load(povtest::data_path("verb_conjugations.tsv"));

  std::vector<VerbEdit> edits = make_verb_edits(doc, {34}, dict);
  REQUIRE(edits.size() == 1);
  CHECK(edits[0].token == 34);
  CHECK(edits[0].old_text == "drive");
  CHECK(edits[0].new_text == "drives");
  CHECK(edits[0].rule == "dictionary");
  CHECK(edits[0].char_start == doc.tokens[34].char_start);
  CHECK(edits[0].char_end == doc.tokens[34].char_end);

  // "was" is already third person past, so no edit comes back.
  CHECK(make_verb_edits(doc, {2}, dict).empty());
}

TEST_CASE("dependency rule defaults cover the usual label spellings") {
  DependencyRules rules = DependencyRules::defaults();
  CHECK(rules.subject_labels.count("nsubj") == 1);
  CHECK(rules.subject_labels.count("nsubjpass") == 1);
  CHECK(rules.verb_chain_labels.count("aux") == 1);
  CHECK(rules.verb_chain_labels.count("cop") == 1);
  CHECK(rules.possessive_labels.count("poss") == 1);
  CHECK(rules.possessive_labels.count("nmod:poss") == 1);
}
