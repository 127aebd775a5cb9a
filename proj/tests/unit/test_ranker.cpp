#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "povshift/candidates.hpp"
#include "povshift/ranker.hpp"
#include "povshift/trees.hpp"
#include "povshift/util.hpp"

using namespace povshift;

namespace {

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.n_tokens = 4;
  cfg.k_mentions = 2;
  cfg.lstm_hidden = 3;
  cfg.mlp_hidden = 4;
  cfg.embedding_dim = 5;
  cfg.max_epochs = 30;
  cfg.patience = 30;
  cfg.seed = 7;
  return cfg;
}

RankingExample tiny_example(const ModelConfig& cfg, const std::string& gold = "he") {
  RankingExample e;
  e.doc_id = "t";
  e.chain_id = 0;
  e.mention_index = 1;
  e.gold = gold;
  e.original = "I";
  e.original_pos = "PRP";
  e.original_case = CaseClass::nominative;
  e.role = GrammaticalRole::subject;
  e.candidates = {classify_string("Nick"), classify_string("he"), classify_string("his son")};
  for (int i = 0; i < cfg.n_tokens; ++i) {
    e.left_tokens.push_back("left" + std::to_string(i));
    e.right_tokens.push_back("right" + std::to_string(i));
  }
  for (int k = 0; k < cfg.k_mentions; ++k) {
    ExampleMention m;
    m.tokens = {"Tom"};
    m.own = k == 0;
    m.dist = 3 * (k + 1);
    m.same_sentence = k == 0;
    e.left_mentions.push_back(m);
    e.right_mentions.push_back(m);
  }
  e.prior_strings = {"Nick"};
  e.previous_string = "Nick";
  return e;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/povshift_ranker_test_") + name;
}

}  // namespace

TEST_CASE("analytic gradients match finite differences") {
  ModelConfig cfg = tiny_config();
  HashEmbeddingProvider provider(cfg.embedding_dim);
  RankingExample e = tiny_example(cfg);
  GradCheckResult r = gradient_check(cfg, provider, e, 100, 99);
  CHECK(r.comparisons > 0);
  CHECK(r.skipped_draws < 100);
  CHECK(r.max_rel_error <= 1e-4);
}

TEST_CASE("zero scoring vector makes every candidate score zero") {
  ModelConfig cfg = tiny_config();
  HashEmbeddingProvider provider(cfg.embedding_dim);
  TrainedRanker model(cfg, provider.version());
  for (ParamView& view : model.params())
    if (view.name == "score_v")
      for (long i = 0; i < view.size; ++i) view.value[i] = 0.0;

  RankingExample e = tiny_example(cfg);
  std::vector<double> scores = model.score_candidates(e, e.candidates, provider);
  REQUIRE(scores.size() == e.candidates.size());
  for (double s : scores) CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("parameters flatten and restore exactly") {
  ModelConfig cfg = tiny_config();
  HashEmbeddingProvider provider(cfg.embedding_dim);
  TrainedRanker model(cfg, provider.version());

  std::vector<double> flat = model.flat_params();
  CHECK(static_cast<long>(flat.size()) > 0);

  TrainedRanker other(cfg, provider.version());
  other.set_flat_params(flat);
  CHECK(other.flat_params() == flat);

  RankingExample e = tiny_example(cfg);
  CHECK(other.score_candidates(e, e.candidates, provider) ==
        model.score_candidates(e, e.candidates, provider));
}

TEST_CASE("serialized models round trip") {
  ModelConfig cfg = tiny_config();
  HashEmbeddingProvider provider(cfg.embedding_dim);
  TrainedRanker model(cfg, provider.version());
  model.metadata()["note"] = "round trip";

  std::string bytes = model.serialize();
  TrainedRanker back = TrainedRanker::deserialize(bytes);
  CHECK(back.config() == cfg);
  CHECK(back.provider_version() == provider.version());
  CHECK(back.metadata().at("note") == "round trip");
  CHECK(back.flat_params() == model.flat_params());
  CHECK(back.serialize() == bytes);
}

TEST_CASE("loading rejects wrong model types and provider mismatches") {
  ModelConfig cfg = tiny_config();
  HashEmbeddingProvider provider(cfg.embedding_dim);

  std::string tree_path = temp_path("tree.bin");
  TreeRanker tree;
  tree.save(tree_path);
  CHECK_THROWS_WITH_AS(TrainedRanker::load(tree_path),
                       doctest::Contains("contains a 'tree' model, expected 'ranker'"),
                       std::runtime_error);

  std::string ranker_path = temp_path("ranker.bin");
  TrainedRanker model(cfg, provider.version());
  model.save(ranker_path);

  TrainedRanker ok = TrainedRanker::load(ranker_path, provider.version());
  CHECK(ok.flat_params() == model.flat_params());

  CHECK_THROWS_WITH_AS(TrainedRanker::load(ranker_path, "other-provider"),
                       doctest::Contains("--force"), std::runtime_error);
  TrainedRanker forced = TrainedRanker::load(ranker_path, "other-provider", true);
  CHECK(forced.flat_params() == model.flat_params());

  std::remove(tree_path.c_str());
  std::remove(ranker_path.c_str());
}

TEST_CASE("disabling both encoders is rejected") {
  ModelConfig cfg = tiny_config();
  cfg.use_token_lstm = false;
  cfg.use_mention_lstm = false;
  CHECK_THROWS_AS(TrainedRanker(cfg, "hash-v1-d5"), std::invalid_argument);
}

TEST_CASE("window size mismatches are reported") {
  ModelConfig cfg = tiny_config();
  HashEmbeddingProvider provider(cfg.embedding_dim);
  TrainedRanker model(cfg, provider.version());

  RankingExample e = tiny_example(cfg);
  e.left_tokens.push_back("extra");
  CHECK_THROWS_WITH_AS(model.score_candidates(e, e.candidates, provider),
                       doctest::Contains("expected 4"), std::runtime_error);
}

TEST_CASE("training separates two easy examples and is reproducible") {
  ModelConfig cfg = tiny_config();
  HashEmbeddingProvider provider(cfg.embedding_dim);

  std::vector<RankingExample> train;
  RankingExample a = tiny_example(cfg, "he");
  a.role = GrammaticalRole::subject;
  RankingExample b = tiny_example(cfg, "Nick");
  b.mention_index = 0;
  b.prior_strings.clear();
  b.previous_string = "";
  b.left_tokens[0] = "start";
  train = {a, b};

  TrainReport report;
  TrainedRanker model = train_ranker(train, {}, cfg, provider, &report);
  CHECK(report.epochs_run > 0);
  CHECK(report.epoch_losses.size() == static_cast<size_t>(report.epochs_run));
  CHECK(model.selection_accuracy(train, provider, false) == doctest::Approx(1.0));

  TrainedRanker again = train_ranker(train, {}, cfg, provider);
  CHECK(again.serialize() == model.serialize());
}

TEST_CASE("train step reduces the loss on one example") {
  ModelConfig cfg = tiny_config();
  cfg.learning_rate = 5e-3;
  HashEmbeddingProvider provider(cfg.embedding_dim);
  TrainedRanker model(cfg, provider.version());
  RankingExample e = tiny_example(cfg);

  double before = model.example_loss(e, provider);
  AdamOptimizer opt(cfg.learning_rate);
  Rng rng(cfg.seed);
  for (int i = 0; i < 40; ++i) model.train_step(e, provider, opt, rng);
  CHECK(model.example_loss(e, provider) < before);
}

TEST_CASE("distance buckets follow the documented cutoffs") {
  CHECK(distance_bucket(1) == 0);
  CHECK(distance_bucket(5) == 0);
  CHECK(distance_bucket(6) == 1);
  CHECK(distance_bucket(10) == 1);
  CHECK(distance_bucket(15) == 2);
  CHECK(distance_bucket(20) == 3);
  CHECK(distance_bucket(25) == 4);
  CHECK(distance_bucket(26) == 5);
  CHECK(distance_bucket(500) == 5);
}

TEST_CASE("candidate features encode history and slot role") {
  ModelConfig cfg = tiny_config();
  RankingExample e = tiny_example(cfg);
  Candidate nick = classify_string("Nick");
  Eigen::VectorXd f = candidate_binary_features(e, nick);
  CHECK(f.size() == kCandidateFeatureDim);
  // "Nick" was used before and immediately before; the slot is a subject.
  CHECK(f.minCoeff() >= 0.0);
  CHECK(f.maxCoeff() <= 1.0);

  Candidate fresh = classify_string("his son");
  Eigen::VectorXd g = candidate_binary_features(e, fresh);
  CHECK(f != g);

  Eigen::VectorXd m = mention_binary_features(true, 3);
  CHECK(m.size() == kMentionFeatureDim);
  CHECK(m(0) == 1.0);
  CHECK(m(1 + distance_bucket(3)) == 1.0);
}
