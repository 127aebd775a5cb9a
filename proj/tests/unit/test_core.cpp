#include "doctest.h"
#include "povshift/core.hpp"
#include "povshift/lexicon.hpp"

using namespace povshift;

namespace {

// "She saw Ann . \" I am here , \" she said ." with a quoted span.
Document make_doc() {
  Document doc;
  const char* words[] = {"She", "saw",  "Ann", ".",    "\"", "I",    "am",
                         "here", ",",    "\"",  "she",  "said", "."};
  const char* pos[] = {"PRP", "VBD", "NNP", ".", "``", "PRP", "VBP",
                       "RB",  ",",   "''",  "PRP", "VBD", "."};
  int offset = 0;
  for (int i = 0; i < 13; ++i) {
    Token t;
    t.surface = words[i];
    t.pos = pos[i];
    t.lemma = words[i];
    t.char_start = offset;
    t.char_end = offset + static_cast<int>(t.surface.size());
    offset = t.char_end + 1;
    doc.source_text += t.surface;
    doc.source_text += ' ';
    doc.tokens.push_back(std::move(t));
  }
  doc.source_text.pop_back();
  doc.sentences = {TokenSpan{0, 3}, TokenSpan{4, 12}};
  doc.quoted_spans = {TokenSpan{4, 9}};

  CorefChain she;
  she.id = 1;
  she.kind = EntityKind::person;
  Mention m1;
  m1.span = TokenSpan{0, 0};
  m1.text = "She";
  Mention m2;
  m2.span = TokenSpan{5, 5};
  m2.text = "I";
  m2.in_quote = true;
  Mention m3;
  m3.span = TokenSpan{10, 10};
  m3.text = "she";
  she.mentions = {m1, m2, m3};
  doc.chains.push_back(she);
  return doc;
}

}  // namespace

TEST_CASE("token span containment and overlap") {
  TokenSpan s{3, 6};
  CHECK(s.contains(3));
  CHECK(s.contains(6));
  CHECK(!s.contains(2));
  CHECK(!s.contains(7));
  CHECK(s.overlaps(TokenSpan{6, 9}));
  CHECK(s.overlaps(TokenSpan{0, 3}));
  CHECK(s.overlaps(TokenSpan{4, 5}));
  CHECK(!s.overlaps(TokenSpan{7, 9}));
  CHECK(!s.overlaps(TokenSpan{0, 2}));
}

TEST_CASE("document span text and sentence lookup") {
  Document doc = make_doc();
  CHECK(doc.span_text(TokenSpan{0, 1}) == "She saw");
  CHECK(doc.span_text(TokenSpan{2, 2}) == "Ann");
  CHECK(doc.sentence_of(0) == 0);
  CHECK(doc.sentence_of(3) == 0);
  CHECK(doc.sentence_of(4) == 1);
  CHECK(doc.sentence_of(12) == 1);
}

TEST_CASE("quoted span membership") {
  Document doc = make_doc();
  CHECK(doc.in_quoted_span(TokenSpan{5, 5}));
  CHECK(doc.in_quoted_span(TokenSpan{6, 7}));
  CHECK(!doc.in_quoted_span(TokenSpan{0, 0}));
  CHECK(!doc.in_quoted_span(TokenSpan{10, 10}));
}

TEST_CASE("chain lookup by id") {
  Document doc = make_doc();
  REQUIRE(doc.chain_by_id(1) != nullptr);
  CHECK(doc.chain_by_id(1)->mentions.size() == 3);
  CHECK(doc.chain_by_id(99) == nullptr);
}

TEST_CASE("chain attribute inference") {
  Document doc = make_doc();
  const CorefChain& chain = doc.chains[0];
  // Out-of-quote mentions are third person ("She"/"she"); the quoted "I"
  // does not make the chain deictic.
  CHECK(infer_chain_pov(doc, chain) == Person::third);
  CHECK(infer_chain_number(chain) == Number::singular);
  CHECK(infer_chain_gender(chain) == Gender::feminine);
}

TEST_CASE("pronoun lexicon basics") {
  const PronounInfo* he = lookup_pronoun("he");
  REQUIRE(he != nullptr);
  CHECK(he->person == Person::third);
  CHECK(he->number == Number::singular);
  CHECK(he->gender == Gender::masculine);
  CHECK(lookup_pronoun("table") == nullptr);

  CHECK(agreement_pronoun(Gender::masculine, Number::singular, CaseClass::nominative) == "he");
  CHECK(agreement_pronoun(Gender::feminine, Number::singular, CaseClass::possessive) == "her");
  CHECK(agreement_pronoun(Gender::masculine, Number::singular, CaseClass::reflexive) ==
        "himself");
  CHECK(agreement_pronoun(Gender::unknown, Number::plural, CaseClass::nominative) == "they");
}
