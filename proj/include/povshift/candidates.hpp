#pragma once

#include <map>
#include <string>
#include <vector>

#include "povshift/core.hpp"
#include "povshift/morph.hpp"

namespace povshift {

enum class CandidateKind { proper_np, pronoun, common_np };
std::string to_string(CandidateKind k);

struct Candidate {
  std::string text;
  CandidateKind kind = CandidateKind::common_np;
  std::vector<CaseClass> cases;  // slot cases this string can fill
  std::string source;            // name | pronoun | predicate_nominal | appositive |
                                 // relational | chain_string | coordination
  bool operator==(const Candidate&) const = default;
  bool fits(CaseClass c) const {
    for (CaseClass x : cases)
      if (x == c) return true;
    return false;
  }
};

// Converse kinship/social relations: "my sister" licenses calling the focus
// "her brother" (masculine focus) or "her sister" (feminine focus).
class RelationalLexicon {
 public:
  struct Entry {
    std::string masculine_converse;
    std::string feminine_converse;
  };
  static RelationalLexicon load(const std::string& path);
  static RelationalLexicon parse(const std::string& tsv_text);
  const Entry* lookup(const std::string& noun_lower) const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Entry> entries_;
};

// Canonical order: proper names, then pronouns, then noun phrases, each block
// lexicographic; duplicates merged (case sets unioned).
void canonicalize(std::vector<Candidate>& candidates);

// Candidate set for the focus entity: name forms and their possessives,
// gendered pronoun inventory plus the emphatic form, predicate nominals and
// appositives, relational-noun converses. Throws on unknown gender.
std::vector<Candidate> build_focus_candidates(const Document& doc,
                                              const std::vector<DependencyArc>& deps,
                                              const CorefChain& focus, const EntitySpec& spec,
                                              const RelationalLexicon& relational,
                                              const DependencyRules& rules);

// Candidate set for a confounding entity. Singular chains contribute their
// unique mention strings; plural deictic chains get the plural pronoun set
// plus coordination rewrites ("Mandy and me" -> "Mandy and him").
std::vector<Candidate> build_confounder_candidates(const CorefChain& chain, Gender focus_gender);

// Keeps the candidates compatible with the original mention's case.
// Reflexive -> reflexive only; possessive -> possessive forms; nominative and
// accusative -> matching pronoun case plus non-possessive noun phrases;
// non-pronominal originals are not narrowed. An empty result falls back to the
// full set and sets *fell_back.
std::vector<Candidate> narrow_by_case(const std::vector<Candidate>& candidates,
                                      CaseClass original_case, bool* fell_back = nullptr);

// Case of a raw mention, for adapters that build Mention records.
CaseClass mention_case(const Document& doc, const TokenSpan& span, GrammaticalRole role);

// Classifies an arbitrary string the way chain-string candidates are classified.
Candidate classify_string(const std::string& text);

}  // namespace povshift
