#pragma once

#include <string>
#include <vector>

#include "povshift/ranker.hpp"
#include "povshift/stat_tests.hpp"

namespace povshift {

struct AblationVariant {
  std::string label;
  ModelConfig config;
};

// The six encoder/feature combinations the ablation harness reports: both
// encoders with all features, both encoders minus the candidate features,
// both encoders minus the per-token mention features, token encoder alone,
// mention encoder alone, and token encoder plus the per-token features.
std::vector<AblationVariant> ablation_variants(const ModelConfig& base);

struct AblationRow {
  std::string label;
  ModelConfig config;
  double accuracy = 0.0;  // narrowed teacher-forced accuracy on the eval set
  std::vector<std::string> doc_ids;
  std::vector<double> per_doc_accuracy;  // aligned with doc_ids
};

struct AblationComparison {
  std::string a;
  std::string b;
  double t = 0.0;
  double p = 1.0;  // one-tailed, mean(accuracy_a - accuracy_b) > 0
};

struct AblationReport {
  std::vector<AblationRow> rows;
  std::vector<AblationComparison> comparisons;  // all pairs, row order
};

// Trains each variant on `train`, evaluates on `eval_set`, and runs pairwise
// one-tailed t-tests over the per-document accuracies. Throws
// std::invalid_argument when the base config disables both encoders. `jobs`
// trains variants concurrently; the provider must tolerate concurrent reads.
AblationReport run_ablations(const std::vector<RankingExample>& train,
                             const std::vector<RankingExample>& eval_set,
                             const ModelConfig& base, EmbeddingProvider& provider, int jobs = 1);

// CSV `variant,accuracy,documents`.
std::string ablation_rows_csv(const AblationReport& report);
// CSV `a,b,t,p`.
std::string ablation_comparisons_csv(const AblationReport& report);

}  // namespace povshift
