#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "povshift/core.hpp"
#include "povshift/json_io.hpp"

namespace povshift {

enum class VerbTense { present, past, modal };

// Penn tag -> tense bucket. VBZ/VBP/VB -> present, VBD/VBN -> past, MD -> modal.
VerbTense tense_from_pos(const std::string& pos);
bool is_finite_verb_pos(const std::string& pos);

struct VerbEntry {
  std::string base;
  std::string third_singular;
  std::string past;
};

// TSV dictionary: lemma<TAB>base<TAB>third_singular<TAB>past, one verb per line,
// '#' comments allowed.
class VerbDictionary {
 public:
  VerbDictionary() = default;
  static VerbDictionary load(const std::string& path);
  static VerbDictionary parse(const std::string& tsv_text);
  void add(const std::string& lemma, VerbEntry entry);
  const VerbEntry* lookup(const std::string& lemma_lower) const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, VerbEntry> entries_;
};

struct ConjugationResult {
  std::string form;
  // dictionary | irregular | contraction | suffix_es | suffix_ies | suffix_s | unchanged
  std::string rule;
};

// Third-person-singular re-conjugation of one verb form. Lemma may be empty,
// in which case the surface form doubles as the base. Idempotent: feeding the
// output back returns it unchanged.
ConjugationResult conjugate_third_singular(const std::string& form, const std::string& lemma,
                                           VerbTense tense, const VerbDictionary& dict);

// Label groups driving dependency matching, shipped as data.
struct DependencyRules {
  std::set<std::string> subject_labels;
  std::set<std::string> verb_chain_labels;  // aux/auxpass/cop hops to the finite verb
  std::set<std::string> possessive_labels;
  static DependencyRules defaults();
  static DependencyRules load(const std::string& path);
};

// Token indices of finite verbs whose subject lies inside an out-of-quote,
// non-narrator mention of the focus chain. Sorted, deduplicated, never inside
// a quoted span.
std::vector<int> find_agreement_verbs(const Document& doc, const std::vector<DependencyArc>& deps,
                                      const CorefChain& focus, const DependencyRules& rules);

// Conjugates each listed verb token; emits edits only where the form changes.
std::vector<VerbEdit> make_verb_edits(const Document& doc, const std::vector<int>& verb_tokens,
                                      const VerbDictionary& dict);

}  // namespace povshift
