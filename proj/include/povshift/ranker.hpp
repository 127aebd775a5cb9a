#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "povshift/embedding.hpp"
#include "povshift/examples.hpp"
#include "povshift/nn.hpp"

namespace povshift {

struct ModelConfig {
  int n_tokens = 50;
  int k_mentions = 10;
  int lstm_hidden = 50;
  int mlp_hidden = 100;
  int embedding_dim = 32;  // overwritten from the provider when training
  double margin = 0.2;
  double learning_rate = 1e-3;
  double dropout = 0.0;
  int max_epochs = 200;
  int patience = 10;
  uint64_t seed = 13;
  bool use_token_lstm = true;
  bool use_mention_lstm = true;
  bool use_phi_t = true;
  bool use_phi_b = true;
  bool operator==(const ModelConfig&) const = default;
};

inline constexpr int kMentionFeatureDim = 7;     // entity flag + 6 distance buckets
inline constexpr int kCandidateFeatureDim = 10;  // shape and chain-state bits

// 0: d <= 5, 1: d <= 10, 2: d <= 15, 3: d <= 20, 4: d <= 25, 5: beyond.
int distance_bucket(int dist);

// Features attached to every token of a mention group: whether the group's
// mention belongs to the current slot's entity, and the bucketed distance.
Eigen::VectorXd mention_binary_features(bool own, int dist);

// Per-candidate features: first-or-second chain position, candidate length
// one-hot (1..5, longer), string used before in this chain, string used for
// the immediately previous mention, slot is a verb's subject or object.
Eigen::VectorXd candidate_binary_features(const RankingExample& e, const Candidate& c);

struct TrainReport {
  int epochs_run = 0;
  int best_epoch = -1;
  double best_dev_accuracy = 0.0;
  std::vector<double> epoch_losses;
  std::vector<double> epoch_dev_accuracy;
};

class TrainedRanker {
 public:
  TrainedRanker() = default;
  // Initializes parameters from config.seed. Throws std::invalid_argument
  // when both encoders are disabled.
  TrainedRanker(const ModelConfig& config, const std::string& provider_version);

  const ModelConfig& config() const { return config_; }
  const std::string& provider_version() const { return provider_version_; }
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  int feature_dim() const;

  // Scores aligned with `candidates`. Deterministic, no dropout.
  std::vector<double> score_candidates(const RankingExample& e,
                                       const std::vector<Candidate>& candidates,
                                       EmbeddingProvider& provider) const;

  // One ranking-loss update over the example's full candidate set. Returns
  // the loss. `dropout_rng` drives the feature-vector dropout mask.
  double train_step(const RankingExample& e, EmbeddingProvider& provider, AdamOptimizer& opt,
                    Rng& dropout_rng);

  // Computes the loss and accumulates parameter gradients without updating.
  double loss_and_gradients(const RankingExample& e, EmbeddingProvider& provider,
                            Rng* dropout_rng = nullptr);

  // Loss of the example under current parameters (no update, no dropout).
  double example_loss(const RankingExample& e, EmbeddingProvider& provider) const;

  // Fraction of examples whose top-scored candidate equals the gold string.
  // Case narrowing is applied when `narrow` is set.
  double selection_accuracy(const std::vector<RankingExample>& examples,
                            EmbeddingProvider& provider, bool narrow) const;

  std::vector<ParamView> params();
  std::vector<double> flat_params() const;
  void set_flat_params(const std::vector<double>& flat);
  void zero_grads();
  std::vector<double> flat_grads() const;

  std::string serialize() const;
  static TrainedRanker deserialize(const std::string& bytes);
  void save(const std::string& path) const;
  // Refuses a provider-version mismatch unless force is set.
  static TrainedRanker load(const std::string& path, const std::string& expected_provider = "",
                            bool force = false);

 private:
  struct Assembled;
  struct Traces;
  double score_assembled(const Assembled& a, Eigen::VectorXd* phi, Traces* traces,
                         const Eigen::VectorXd* dropout_mask) const;
  Assembled assemble(const RankingExample& e, const Candidate& c,
                     EmbeddingProvider& provider) const;
  void backward(const Assembled& a, const Traces& traces, const Eigen::VectorXd& phi,
                double dscore, const Eigen::VectorXd* dropout_mask);

  ModelConfig config_;
  std::string provider_version_;
  std::map<std::string, std::string> metadata_;

  LstmParams tok_left_, tok_right_, men_left_, men_right_;
  Eigen::VectorXd emb_pad_, emb_sep_, emb_unk_;
  Eigen::VectorXd d_emb_pad_, d_emb_sep_, d_emb_unk_;
  Eigen::MatrixXd score_W_, d_score_W_;
  Eigen::VectorXd score_b_, d_score_b_, score_v_, d_score_v_;
};

// Trains with per-example updates, shuffling each epoch, early stopping on
// dev selection accuracy (train accuracy when dev is empty) with the
// configured patience; returns the best checkpoint.
TrainedRanker train_ranker(const std::vector<RankingExample>& train,
                           const std::vector<RankingExample>& dev, const ModelConfig& config,
                           EmbeddingProvider& provider, TrainReport* report = nullptr);

struct GridResult {
  ModelConfig config;
  double dev_accuracy = 0.0;
};

// Margin x learning rate x dropout grid. Returns the best model; ties keep
// the earliest grid point. `jobs` trains grid points concurrently.
TrainedRanker grid_search_train(const std::vector<RankingExample>& train,
                                const std::vector<RankingExample>& dev,
                                const ModelConfig& base_config, EmbeddingProvider& provider,
                                std::vector<GridResult>* results = nullptr, int jobs = 1);

struct GradCheckResult {
  double max_rel_error = 0.0;
  long comparisons = 0;
  int skipped_draws = 0;
};

// Compares analytic gradients of loss(example) against central finite
// differences over `draws` random parameter initializations. Draws whose
// hinge terms sit within 1e-3 of the kink are skipped.
GradCheckResult gradient_check(const ModelConfig& config, EmbeddingProvider& provider,
                               const RankingExample& example, int draws, uint64_t seed);

}  // namespace povshift
