#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "povshift/core.hpp"
#include "povshift/morph.hpp"

namespace povshift {

// Raw annotations produced by a coreference provider.
struct AnnotationBundle {
  std::vector<Token> tokens;
  std::vector<TokenSpan> sentences;
  std::vector<CorefChain> chains;
};

struct NerSpan {
  TokenSpan span;
  std::string label;  // "PERSON", "ORG", ...
  bool operator==(const NerSpan&) const = default;
};

struct AnnotationError : std::runtime_error {
  AnnotationError(const std::string& provider, const std::string& version,
                  const std::string& what)
      : std::runtime_error("annotation provider '" + provider + "' (version " + version +
                           ") failed: " + what) {}
};

class CorefProvider {
 public:
  virtual ~CorefProvider() = default;
  virtual std::string version() const = 0;
  virtual AnnotationBundle annotate(const std::string& text) = 0;
};

class NerProvider {
 public:
  virtual ~NerProvider() = default;
  virtual std::string version() const = 0;
  virtual std::vector<NerSpan> tag(const Document& doc) = 0;
};

class DepProvider {
 public:
  virtual ~DepProvider() = default;
  virtual std::string version() const = 0;
  virtual std::vector<DependencyArc> parse(const Document& doc) = 0;
};

struct AnnotationAdapters {
  std::shared_ptr<CorefProvider> coref;
  std::shared_ptr<NerProvider> ner;
  std::shared_ptr<DepProvider> deps;
};

// Adapters that replay the annotations stored in a benchmark document.
AnnotationAdapters make_gold_adapters(const LoadedDocument& loaded);

// Full annotation path: coreference, person filtering via NER overlap and
// human-pronoun evidence, dependency arcs, quoted spans, chain attributes.
// The returned document carries person chains only and passes validation.
LoadedDocument annotate(const std::string& raw_text, const AnnotationAdapters& adapters,
                        std::vector<std::string>* warnings = nullptr);

// Maximal token ranges strictly inside balanced quote pairs. Handles straight,
// curly and PTB-style quotes. Unbalanced openers close at the sentence end and
// unmatched closers open at the sentence start, each with a warning.
std::vector<TokenSpan> detect_quoted_spans(const std::vector<Token>& tokens,
                                           const std::vector<TokenSpan>& sentences,
                                           std::vector<std::string>* warnings = nullptr);

class PerformativeLexicon {
 public:
  static PerformativeLexicon load(const std::string& path);
  static PerformativeLexicon parse(const std::string& text);
  bool contains(const std::string& lemma_lower) const { return lemmas_.count(lemma_lower) > 0; }
  size_t size() const { return lemmas_.size(); }

 private:
  std::set<std::string> lemmas_;
};

// Flags first-person mentions that are subjects of a present-tense
// performative verb ("I promise you", "I guess"). Sets Mention::narrator and
// returns the (chain index, mention index) pairs flagged.
std::vector<std::pair<int, int>> detect_narrator_mentions(Document& doc,
                                                          const std::vector<DependencyArc>& deps,
                                                          const PerformativeLexicon& lexicon,
                                                          const DependencyRules& rules);

struct IdentificationError : std::runtime_error {
  std::vector<int> candidate_chains;
  IdentificationError(const std::string& what, std::vector<int> candidates)
      : std::runtime_error(what), candidate_chains(std::move(candidates)) {}
};

// Chain id of the entity whose point of view is being converted. Unique pov
// match wins; name evidence breaks ties, then chain size. Throws
// IdentificationError listing the contenders otherwise.
int identify_focus_chain(const Document& doc, const EntitySpec& spec);

struct ConfounderSets {
  std::vector<int> singular;        // chains with 3rd-person pronouns of the focus gender
  std::vector<int> plural_deictic;  // plural chains sharing the original point of view
};

ConfounderSets identify_confounders(const Document& doc, int focus_id, Gender focus_gender,
                                    Person from_pov);

// Grammatical role of a span given dependency arcs.
GrammaticalRole role_from_deps(const std::vector<DependencyArc>& deps, const TokenSpan& span,
                               const DependencyRules& rules);

}  // namespace povshift
