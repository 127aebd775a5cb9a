#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "povshift/lexicon.hpp"

namespace povshift {

struct Token {
  std::string surface;
  std::string pos;
  std::string lemma;
  int char_start = 0;  // half-open [char_start, char_end) into Document::source_text
  int char_end = 0;
  bool operator==(const Token&) const = default;
};

// Inclusive token index range.
struct TokenSpan {
  int start = 0;
  int end = 0;
  bool operator==(const TokenSpan&) const = default;
  bool contains(int idx) const { return idx >= start && idx <= end; }
  bool contains(const TokenSpan& o) const { return o.start >= start && o.end <= end; }
  bool overlaps(const TokenSpan& o) const { return start <= o.end && o.start <= end; }
  int length() const { return end - start + 1; }
};

enum class GrammaticalRole { subject, object, other };
std::string to_string(GrammaticalRole r);
std::optional<GrammaticalRole> role_from_string(const std::string& s);

struct Mention {
  TokenSpan span;
  std::string text;  // concatenated token surfaces, space separated
  CaseClass case_class = CaseClass::non_pronominal;
  GrammaticalRole role = GrammaticalRole::other;
  bool in_quote = false;
  bool narrator = false;
  bool operator==(const Mention&) const = default;
};

enum class EntityKind { person, other };
std::string to_string(EntityKind k);

struct CorefChain {
  int id = 0;
  EntityKind kind = EntityKind::other;
  Person pov = Person::third;  // first/second when an out-of-quote deictic mention exists
  Number number = Number::unknown;
  Gender gender = Gender::unknown;
  std::vector<Mention> mentions;  // document order
  bool operator==(const CorefChain&) const = default;
};

struct Document {
  std::string doc_id;
  std::string genre;
  std::string source_text;
  std::vector<Token> tokens;
  std::vector<TokenSpan> sentences;  // inclusive token ranges, in order
  std::vector<CorefChain> chains;
  std::vector<TokenSpan> quoted_spans;
  bool operator==(const Document&) const = default;

  const CorefChain* chain_by_id(int id) const;
  // Sentence index of a token, -1 if the token is outside every sentence.
  int sentence_of(int token_idx) const;
  bool in_quoted_span(const TokenSpan& span) const;
  std::string span_text(const TokenSpan& span) const;
};

// Requested conversion target. Names may be empty when unknown.
struct EntitySpec {
  std::string full_name;
  std::string given_name;
  std::string family_name;
  Gender gender = Gender::unknown;
  Person from_pov = Person::first;
};

struct DependencyArc {
  int head = 0;  // token index of the governor
  int dep = 0;   // token index of the dependent
  std::string label;
  bool operator==(const DependencyArc&) const = default;
};

// Gold conversion annotations carried by benchmark documents.
struct GoldConversion {
  // chain id -> replacement string per mention position (parallel to chain.mentions).
  std::map<int, std::vector<std::string>> replacements;
  // token index -> re-conjugated form.
  std::map<int, std::string> verb_changes;
  // chain id -> expected candidate strings (optional, for component scoring).
  std::map<int, std::vector<std::string>> candidates;
  bool empty() const {
    return replacements.empty() && verb_changes.empty() && candidates.empty();
  }
  bool operator==(const GoldConversion&) const = default;
};

// A document plus the side-band annotations the pipeline consumes.
struct LoadedDocument {
  Document doc;
  std::vector<DependencyArc> deps;
  GoldConversion gold;
  bool operator==(const LoadedDocument&) const = default;
};

// Structural validation. Total: never throws, reports every violation as a
// human-readable string naming the offending field and index.
std::vector<std::string> validate_document(const Document& doc);

// Derives pov/number/gender/person-kind evidence for a chain from its mentions.
Person infer_chain_pov(const Document& doc, const CorefChain& chain);
Number infer_chain_number(const CorefChain& chain);
Gender infer_chain_gender(const CorefChain& chain);

}  // namespace povshift
