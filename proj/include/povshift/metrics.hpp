#pragma once

#include <optional>
#include <string>
#include <vector>

#include "povshift/json_io.hpp"
#include "povshift/select.hpp"

namespace povshift {

struct DocumentScore {
  std::string doc_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long n_changed = 0;
  long n_correct = 0;
  long n_gold = 0;
};

struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long n_changed = 0;  // words the system changed
  long n_correct = 0;  // changed words matching the gold word
  long n_gold = 0;     // words the gold conversion changed
  std::vector<DocumentScore> per_document;
};

// P, R, and F1 from raw counts; F1 is 0 when both P and R are 0.
ScoreReport report_from_counts(long n_changed, long n_correct, long n_gold);

// Word-level comparison of two conversions of the same document. Edits are
// aligned by slot (chain and mention index for mention edits, token index for
// verb edits) and compared position by position against the original words;
// a word counts as changed when it differs from the original at its
// position. Throws std::invalid_argument when the doc ids differ.
ScoreReport score_conversion(const ConversionResult& predicted, const ConversionResult& gold);

// Micro-average: counts are summed, rates recomputed, per-document rows kept.
ScoreReport aggregate_reports(const std::vector<ScoreReport>& reports);

// Fraction of gold-changed mention slots whose predicted replacement equals
// the gold replacement exactly (case-sensitive).
double mention_selection_accuracy(const ConversionResult& predicted, const ConversionResult& gold);

// Per-stage scores computed with gold upstream inputs: rewritten-chain
// identification, agreement-verb identification, verb conjugation on the
// gold verb set, and candidate-set construction. Stages without gold
// annotations are skipped with a notice.
struct ComponentScores {
  std::optional<ScoreReport> chain_identification;
  std::optional<ScoreReport> verb_identification;
  std::optional<ScoreReport> verb_conjugation;
  std::optional<ScoreReport> candidate_sets;
  std::vector<std::string> notices;
};

ComponentScores component_scores(const LoadedDocument& loaded, const PreparedConversion& prepared,
                                 const PipelineConfig& cfg);

// CSV rows `metric,precision,recall,f1,n_changed,n_correct,n_gold`.
std::string score_report_csv(const std::string& label, const ScoreReport& report);
std::string component_scores_csv(const ComponentScores& scores);

}  // namespace povshift
