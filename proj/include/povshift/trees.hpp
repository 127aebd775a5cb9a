#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "povshift/embedding.hpp"
#include "povshift/examples.hpp"
#include "povshift/select.hpp"

namespace povshift {

enum class TreeVariant { single_tree, random_forest, gradient_boosted };

std::string to_string(TreeVariant v);
// Accepts "tree", "forest", and "gbt".
std::optional<TreeVariant> tree_variant_from_string(const std::string& s);

struct TreeConfig {
  TreeVariant variant = TreeVariant::single_tree;
  int max_depth = 8;
  int min_leaf_size = 2;
  int n_trees = 50;            // forest size / boosting rounds
  double learning_rate = 0.1;  // boosting shrinkage
  uint64_t seed = 13;
  bool operator==(const TreeConfig&) const = default;
};

// Per-variant defaults: boosted trees are shallower.
TreeConfig default_tree_config(TreeVariant variant);

// Dimensionality of tree_features for the current schema.
int tree_feature_dim();

// Handcrafted feature vector for one (mention position, candidate) pair.
// Three groups of 10 mention records (nearest preceding, nearest following,
// nearest preceding same-entity), each holding distance buckets, string kind,
// same-entity, same-sentence, number-and-gender agreement with the candidate,
// same-string-as-candidate, length one-hot, and a padding flag; followed by
// the provider's context-fit score for the candidate and the current
// mention's POS, length, and subject-or-object features.
std::vector<double> tree_features(const RankingExample& example, const Candidate& candidate,
                                  EmbeddingProvider& provider);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  double predict(const std::vector<double>& x) const;
};

// Binary classifier over (position, candidate) pairs behind the
// MentionScorer interface: scores are positive-class probabilities.
class TreeRanker : public MentionScorer {
 public:
  TreeRanker() = default;

  std::string name() const override { return to_string(config_.variant); }
  std::vector<double> score(const RankingExample& example,
                            const std::vector<Candidate>& candidates) override;

  const TreeConfig& config() const { return config_; }
  const std::string& provider_version() const { return provider_version_; }
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  // Scoring needs an embedding provider for the context-fit feature.
  void attach_provider(EmbeddingProvider& provider) { provider_ = &provider; }

  double positive_probability(const std::vector<double>& features) const;

  // Fraction of examples whose top-probability candidate equals the gold
  // string, case narrowing applied.
  double selection_accuracy(const std::vector<RankingExample>& examples);

  std::string serialize() const;
  static TreeRanker deserialize(const std::string& bytes);
  void save(const std::string& path) const;
  // Refuses a provider-version mismatch unless force is set.
  static TreeRanker load(const std::string& path, const std::string& expected_provider = "",
                         bool force = false);

  friend TreeRanker train_tree_ranker(const std::vector<RankingExample>& examples,
                                      const TreeConfig& config, EmbeddingProvider& provider);

 private:
  TreeConfig config_;
  std::string provider_version_;
  std::map<std::string, std::string> metadata_;
  double base_score_ = 0.0;  // boosted-tree log-odds prior
  std::vector<DecisionTree> trees_;
  EmbeddingProvider* provider_ = nullptr;
};

// One training instance per (example, full-set candidate), positive when the
// candidate equals the gold string. Throws std::runtime_error when the
// instances are all one class.
TreeRanker train_tree_ranker(const std::vector<RankingExample>& examples,
                             const TreeConfig& config, EmbeddingProvider& provider);

// Highest positive probability over the case-narrowed candidate set,
// earliest candidate on ties.
std::string tree_select(TreeRanker& model, const RankingExample& example);

}  // namespace povshift
