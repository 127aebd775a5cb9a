#pragma once

#include <string>
#include <vector>

#include "povshift/examples.hpp"
#include "povshift/morph.hpp"
#include "povshift/preprocess.hpp"

namespace povshift {

// Resources the conversion pipeline draws on besides the document.
struct PipelineConfig {
  EntitySpec spec;
  DependencyRules rules = DependencyRules::defaults();
  RelationalLexicon relational;
  PerformativeLexicon performatives;
  VerbDictionary verbs;
  WindowConfig windows;
};

// Output of the deterministic pipeline stages: the document with narrator
// mentions flagged, the verb edits, the confounder sets, and the slot
// schedule with candidate sets attached.
struct PreparedConversion {
  Document doc;
  std::vector<DependencyArc> deps;
  ConversionPlan plan;
  std::vector<VerbEdit> verb_edits;
  int focus_chain = -1;
  Gender focus_gender = Gender::unknown;
  ConfounderSets confounders;
  WindowConfig windows;
  std::vector<std::string> warnings;
};

// Focus-chain identification, narrator masking, agreement-verb
// re-conjugation, candidate-set construction, and slot scheduling. Nested
// slots are dropped (outermost kept) with a warning. Throws
// IdentificationError when no focus chain can be determined and
// std::invalid_argument when the focus gender is unknown.
PreparedConversion prepare_conversion(const LoadedDocument& loaded, const PipelineConfig& cfg);

// Candidate-scoring strategy plugged into select_mentions.
class MentionScorer {
 public:
  virtual ~MentionScorer() = default;
  virtual std::string name() const = 0;
  // When false, the full candidate set is scored without case narrowing.
  virtual bool use_case_narrowing() const { return true; }
  // Scores aligned with `candidates`.
  virtual std::vector<double> score(const RankingExample& example,
                                    const std::vector<Candidate>& candidates) = 0;
};

// Left-to-right selection over the prepared slots. Narrowed singletons are
// forced without scoring; ties fall back to canonical candidate order;
// sentence-initial replacements are capitalized in the rendered text only.
ConversionResult select_mentions(const PreparedConversion& prepared, MentionScorer& scorer);

ConversionResult convert_document(const LoadedDocument& loaded, const PipelineConfig& cfg,
                                  MentionScorer& scorer);

// Teacher-forced examples for a benchmark document: one per rewritable slot,
// gold strings from the document's gold annotations (the original mention
// string when absent). Gold strings missing from the candidate set are
// appended with a warning.
std::vector<RankingExample> extract_conversion_examples(const LoadedDocument& loaded,
                                                        const PipelineConfig& cfg,
                                                        std::vector<std::string>* warnings = nullptr);

}  // namespace povshift
