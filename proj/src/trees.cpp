#include "povshift/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "povshift/baselines.hpp"
#include "povshift/container.hpp"
#include "povshift/ranker.hpp"
#include "povshift/util.hpp"

namespace povshift {

using nlohmann::json;

namespace {

constexpr int kNeighbors = 10;      // mention records per group
constexpr int kRecordBits = 20;     // bits per mention record
constexpr int kGroups = 3;          // before, after, before-same-entity
constexpr int kPosBuckets = 6;      // PRP, PRP$, NNP, NNS, NN, other
constexpr int kLengthBuckets = 6;   // 1..5 words, longer

struct AgreementInfo {
  Gender gender = Gender::unknown;
  Number number = Number::unknown;
};

// Gender and number readable off a mention string: pronouns from the
// inventory, kinship nouns from the lexicon, everything else unknown gender
// and singular number.
AgreementInfo string_agreement(const std::string& text) {
  std::string lower = lowercase(trim(text));
  if (const PronounInfo* info = lookup_pronoun(lower)) return {info->gender, info->number};
  std::vector<std::string> toks = split_ws(lower);
  if (toks.empty()) return {};
  return {kinship_noun_gender(toks.back()), Number::singular};
}

bool agreement_match(const AgreementInfo& a, const AgreementInfo& b) {
  return a.gender != Gender::unknown && a.gender == b.gender && a.number != Number::unknown &&
         a.number == b.number;
}

bool is_pad_mention(const ExampleMention& m) {
  return m.tokens.size() == 1 && m.tokens[0] == kPadToken;
}

int pos_bucket(const std::string& pos) {
  if (pos == "PRP") return 0;
  if (pos == "PRP$") return 1;
  if (pos == "NNP" || pos == "NNPS") return 2;
  if (pos == "NNS") return 3;
  if (pos == "NN") return 4;
  return 5;
}

// Nearest-first selection of up to kNeighbors real mentions, padded out.
std::vector<ExampleMention> nearest_mentions(const std::vector<ExampleMention>& mentions,
                                             bool preceding, bool same_entity_only) {
  std::vector<ExampleMention> picked;
  auto take = [&](const ExampleMention& m) {
    if (is_pad_mention(m)) return;
    if (same_entity_only && !m.own) return;
    if (static_cast<int>(picked.size()) < kNeighbors) picked.push_back(m);
  };
  if (preceding) {
    for (auto it = mentions.rbegin(); it != mentions.rend(); ++it) take(*it);
  } else {
    for (const ExampleMention& m : mentions) take(m);
  }
  while (static_cast<int>(picked.size()) < kNeighbors) {
    ExampleMention pad;
    pad.tokens = {kPadToken};
    picked.push_back(pad);
  }
  return picked;
}

void write_mention_record(std::vector<double>& out, size_t base, const ExampleMention& m,
                          const Candidate& candidate, const AgreementInfo& candidate_agreement) {
  if (is_pad_mention(m)) {
    out[base + 19] = 1.0;
    return;
  }
  out[base + distance_bucket(m.dist)] = 1.0;
  if (m.own) out[base + 9] = 1.0;
  if (m.same_sentence) out[base + 10] = 1.0;
  bool unresolved = !m.resolved || (m.tokens.size() == 1 && m.tokens[0] == kUnkToken);
  if (unresolved) return;  // string-derived bits stay unknown
  std::string text = join(m.tokens, " ");
  Candidate classified = classify_string(text);
  int kind = classified.kind == CandidateKind::pronoun    ? 0
             : classified.kind == CandidateKind::proper_np ? 1
                                                           : 2;
  out[base + 6 + kind] = 1.0;
  if (agreement_match(string_agreement(text), candidate_agreement)) out[base + 11] = 1.0;
  if (text == candidate.text) out[base + 12] = 1.0;
  size_t len = std::min<size_t>(m.tokens.size(), kLengthBuckets);
  if (len >= 1) out[base + 13 + (len - 1)] = 1.0;
}

// Recursive CART construction. Splits maximize the sum-of-squares reduction
// of the targets; leaf values are sum(target)/sum(weight), which is the mean
// for unit weights and the Newton step for boosting residuals.
struct TreeBuild {
  const std::vector<std::vector<double>>& x;
  const std::vector<double>& target;
  const std::vector<double>& weight;
  int dim;
  int max_depth;
  int min_leaf;
  int mtry = 0;  // features considered per split; 0 means all
  Rng* rng = nullptr;
};

int grow_node(DecisionTree& tree, const TreeBuild& ctx, std::vector<int>& items, int depth) {
  int node_id = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{});

  double sum_t = 0.0, sum_w = 0.0;
  for (int i : items) {
    sum_t += ctx.target[i];
    sum_w += ctx.weight[i];
  }
  tree.nodes[node_id].value = sum_t / (sum_w + 1e-12);

  if (depth >= ctx.max_depth || static_cast<int>(items.size()) < 2 * ctx.min_leaf)
    return node_id;
  bool pure = true;
  for (int i : items)
    if (std::abs(ctx.target[i] - ctx.target[items[0]]) > 1e-12) {
      pure = false;
      break;
    }
  if (pure) return node_id;

  std::vector<int> features;
  if (ctx.mtry <= 0 || ctx.mtry >= ctx.dim) {
    features.resize(ctx.dim);
    std::iota(features.begin(), features.end(), 0);
  } else {
    std::vector<int> all(ctx.dim);
    std::iota(all.begin(), all.end(), 0);
    for (int i = 0; i < ctx.mtry; ++i) {
      size_t j = i + ctx.rng->next_index(ctx.dim - i);
      std::swap(all[i], all[j]);
    }
    features.assign(all.begin(), all.begin() + ctx.mtry);
    std::sort(features.begin(), features.end());
  }

  double parent_sse = 0.0;
  double n = static_cast<double>(items.size());
  {
    double sum = 0.0, sq = 0.0;
    for (int i : items) {
      sum += ctx.target[i];
      sq += ctx.target[i] * ctx.target[i];
    }
    parent_sse = sq - sum * sum / n;
  }

  double best_gain = 1e-12;
  int best_feature = -1;
  double best_threshold = 0.0;
  std::vector<std::pair<double, int>> ordered;
  ordered.reserve(items.size());
  for (int f : features) {
    ordered.clear();
    for (int i : items) ordered.emplace_back(ctx.x[i][f], i);
    std::sort(ordered.begin(), ordered.end());
    double left_sum = 0.0, left_sq = 0.0, total_sum = 0.0, total_sq = 0.0;
    for (const auto& [v, i] : ordered) {
      total_sum += ctx.target[i];
      total_sq += ctx.target[i] * ctx.target[i];
    }
    for (size_t k = 0; k + 1 < ordered.size(); ++k) {
      double t = ctx.target[ordered[k].second];
      left_sum += t;
      left_sq += t * t;
      if (ordered[k].first == ordered[k + 1].first) continue;
      double nl = static_cast<double>(k + 1), nr = n - nl;
      if (nl < ctx.min_leaf || nr < ctx.min_leaf) continue;
      double right_sum = total_sum - left_sum, right_sq = total_sq - left_sq;
      double gain =
          parent_sse - (left_sq - left_sum * left_sum / nl) - (right_sq - right_sum * right_sum / nr);
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = f;
        best_threshold = (ordered[k].first + ordered[k + 1].first) / 2.0;
      }
    }
  }
  if (best_feature < 0) return node_id;

  std::vector<int> left_items, right_items;
  for (int i : items)
    (ctx.x[i][best_feature] <= best_threshold ? left_items : right_items).push_back(i);
  int left_id = grow_node(tree, ctx, left_items, depth + 1);
  int right_id = grow_node(tree, ctx, right_items, depth + 1);
  tree.nodes[node_id].feature = best_feature;
  tree.nodes[node_id].threshold = best_threshold;
  tree.nodes[node_id].left = left_id;
  tree.nodes[node_id].right = right_id;
  return node_id;
}

DecisionTree grow_tree(const TreeBuild& ctx, std::vector<int> items) {
  DecisionTree tree;
  grow_node(tree, ctx, items, 0);
  return tree;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

json config_to_json(const TreeConfig& c) {
  json j;
  j["variant"] = to_string(c.variant);
  j["max_depth"] = c.max_depth;
  j["min_leaf_size"] = c.min_leaf_size;
  j["n_trees"] = c.n_trees;
  j["learning_rate"] = c.learning_rate;
  j["seed"] = c.seed;
  return j;
}

TreeConfig config_from_json(const json& j) {
  TreeConfig c;
  if (auto v = tree_variant_from_string(j.value("variant", "tree"))) c.variant = *v;
  c.max_depth = j.value("max_depth", c.max_depth);
  c.min_leaf_size = j.value("min_leaf_size", c.min_leaf_size);
  c.n_trees = j.value("n_trees", c.n_trees);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.seed = j.value("seed", c.seed);
  return c;
}

}  // namespace

std::string to_string(TreeVariant v) {
  switch (v) {
    case TreeVariant::single_tree: return "tree";
    case TreeVariant::random_forest: return "forest";
    case TreeVariant::gradient_boosted: return "gbt";
  }
  return "tree";
}

std::optional<TreeVariant> tree_variant_from_string(const std::string& s) {
  if (s == "tree") return TreeVariant::single_tree;
  if (s == "forest") return TreeVariant::random_forest;
  if (s == "gbt") return TreeVariant::gradient_boosted;
  return std::nullopt;
}

TreeConfig default_tree_config(TreeVariant variant) {
  TreeConfig c;
  c.variant = variant;
  if (variant == TreeVariant::gradient_boosted) c.max_depth = 4;
  return c;
}

int tree_feature_dim() {
  return kGroups * kNeighbors * kRecordBits + 1 + kPosBuckets + kLengthBuckets + 1;
}

std::vector<double> tree_features(const RankingExample& example, const Candidate& candidate,
                                  EmbeddingProvider& provider) {
  std::vector<double> out(tree_feature_dim(), 0.0);
  AgreementInfo candidate_agreement = string_agreement(candidate.text);

  std::vector<std::vector<ExampleMention>> groups = {
      nearest_mentions(example.left_mentions, true, false),
      nearest_mentions(example.right_mentions, false, false),
      nearest_mentions(example.left_mentions, true, true),
  };
  size_t base = 0;
  for (const auto& group : groups)
    for (const ExampleMention& m : group) {
      write_mention_record(out, base, m, candidate, candidate_agreement);
      base += kRecordBits;
    }

  std::vector<std::string> context = example.left_tokens;
  context.insert(context.end(), example.right_tokens.begin(), example.right_tokens.end());
  out[base] = provider.context_fit(context, candidate.text);
  ++base;

  out[base + pos_bucket(example.original_pos)] = 1.0;
  base += kPosBuckets;

  size_t len = std::min<size_t>(split_ws(example.original).size(), kLengthBuckets);
  if (len >= 1) out[base + (len - 1)] = 1.0;
  base += kLengthBuckets;

  if (example.role != GrammaticalRole::other) out[base] = 1.0;
  return out;
}

double DecisionTree::predict(const std::vector<double>& x) const {
  if (nodes.empty()) return 0.0;
  int at = 0;
  while (nodes[at].feature >= 0)
    at = x[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
  return nodes[at].value;
}

std::vector<double> TreeRanker::score(const RankingExample& example,
                                      const std::vector<Candidate>& candidates) {
  if (!provider_)
    throw std::runtime_error("tree model has no embedding provider attached");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const Candidate& c : candidates)
    scores.push_back(positive_probability(tree_features(example, c, *provider_)));
  return scores;
}

double TreeRanker::positive_probability(const std::vector<double>& features) const {
  if (trees_.empty()) return 0.0;
  if (config_.variant == TreeVariant::gradient_boosted) {
    double f = base_score_;
    for (const DecisionTree& t : trees_) f += t.predict(features);
    return sigmoid(f);
  }
  double sum = 0.0;
  for (const DecisionTree& t : trees_) sum += t.predict(features);
  double p = sum / static_cast<double>(trees_.size());
  return std::clamp(p, 0.0, 1.0);
}

double TreeRanker::selection_accuracy(const std::vector<RankingExample>& examples) {
  return scorer_selection_accuracy(*this, examples);
}

std::string TreeRanker::serialize() const {
  json header;
  header["type"] = "tree";
  header["config"] = config_to_json(config_);
  header["provider_version"] = provider_version_;
  header["metadata"] = metadata_;
  header["base_score"] = base_score_;
  std::vector<ModelBlock> blocks;
  for (size_t t = 0; t < trees_.size(); ++t) {
    ModelBlock b;
    b.name = "tree." + std::to_string(t);
    b.values.reserve(trees_[t].nodes.size() * 5);
    for (const TreeNode& n : trees_[t].nodes) {
      b.values.push_back(n.feature);
      b.values.push_back(n.threshold);
      b.values.push_back(n.left);
      b.values.push_back(n.right);
      b.values.push_back(n.value);
    }
    blocks.push_back(std::move(b));
  }
  return pack_model(header, blocks);
}

TreeRanker TreeRanker::deserialize(const std::string& bytes) {
  std::vector<ModelBlock> blocks;
  json header = unpack_model(bytes, &blocks);
  std::string type = header.value("type", "");
  if (type != "tree")
    throw std::runtime_error("model file contains a '" + type + "' model, expected 'tree'");
  TreeRanker model;
  model.config_ = config_from_json(header.at("config"));
  model.provider_version_ = header.value("provider_version", "");
  if (header.contains("metadata"))
    model.metadata_ = header.at("metadata").get<std::map<std::string, std::string>>();
  model.base_score_ = header.value("base_score", 0.0);
  for (const ModelBlock& b : blocks) {
    if (b.values.size() % 5 != 0)
      throw std::runtime_error("model block '" + b.name + "' is not a node table");
    DecisionTree tree;
    for (size_t i = 0; i < b.values.size(); i += 5) {
      TreeNode n;
      n.feature = static_cast<int>(b.values[i]);
      n.threshold = b.values[i + 1];
      n.left = static_cast<int>(b.values[i + 2]);
      n.right = static_cast<int>(b.values[i + 3]);
      n.value = b.values[i + 4];
      tree.nodes.push_back(n);
    }
    model.trees_.push_back(std::move(tree));
  }
  return model;
}

void TreeRanker::save(const std::string& path) const { write_file(path, serialize()); }

TreeRanker TreeRanker::load(const std::string& path, const std::string& expected_provider,
                            bool force) {
  TreeRanker model = deserialize(read_file(path));
  if (!expected_provider.empty() && model.provider_version_ != expected_provider && !force)
    throw std::runtime_error("model was trained with embedding provider '" +
                             model.provider_version_ + "' but the current provider is '" +
                             expected_provider + "'; pass --force to load anyway");
  return model;
}

TreeRanker train_tree_ranker(const std::vector<RankingExample>& examples,
                             const TreeConfig& config, EmbeddingProvider& provider) {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (const RankingExample& e : examples)
    for (const Candidate& c : e.candidates) {
      x.push_back(tree_features(e, c, provider));
      y.push_back(c.text == e.gold ? 1.0 : 0.0);
    }
  long positives = static_cast<long>(std::count(y.begin(), y.end(), 1.0));
  long negatives = static_cast<long>(y.size()) - positives;
  if (positives == 0 || negatives == 0)
    throw std::runtime_error("tree training needs positive and negative instances; got " +
                             std::to_string(positives) + " positive and " +
                             std::to_string(negatives) + " negative");

  TreeRanker model;
  model.config_ = config;
  model.provider_version_ = provider.version();
  model.provider_ = &provider;
  int n = static_cast<int>(x.size());
  int dim = tree_feature_dim();
  std::vector<double> unit_weights(n, 1.0);
  Rng rng(config.seed);

  if (config.variant == TreeVariant::single_tree) {
    TreeBuild ctx{x, y, unit_weights, dim, config.max_depth, config.min_leaf_size, 0, nullptr};
    std::vector<int> items(n);
    std::iota(items.begin(), items.end(), 0);
    model.trees_.push_back(grow_tree(ctx, std::move(items)));
  } else if (config.variant == TreeVariant::random_forest) {
    int mtry = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim)))));
    for (int t = 0; t < config.n_trees; ++t) {
      Rng tree_rng = rng.fork(static_cast<uint64_t>(t) + 1);
      std::vector<int> items;
      items.reserve(n);
      for (int i = 0; i < n; ++i) items.push_back(static_cast<int>(tree_rng.next_index(n)));
      std::sort(items.begin(), items.end());
      TreeBuild ctx{x, y, unit_weights, dim, config.max_depth, config.min_leaf_size, mtry,
                    &tree_rng};
      model.trees_.push_back(grow_tree(ctx, std::move(items)));
    }
  } else {
    double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double p0 = std::clamp(mean, 1e-6, 1.0 - 1e-6);
    model.base_score_ = std::log(p0 / (1.0 - p0));
    std::vector<double> f(n, model.base_score_), residual(n), weight(n);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int round = 0; round < config.n_trees; ++round) {
      for (int i = 0; i < n; ++i) {
        double p = sigmoid(f[i]);
        residual[i] = y[i] - p;
        weight[i] = std::max(p * (1.0 - p), 1e-12);
      }
      TreeBuild ctx{x, residual, weight, dim, config.max_depth, config.min_leaf_size, 0, nullptr};
      DecisionTree tree = grow_tree(ctx, all);
      for (TreeNode& node : tree.nodes)
        if (node.feature < 0) node.value *= config.learning_rate;
      for (int i = 0; i < n; ++i) f[i] += tree.predict(x[i]);
      model.trees_.push_back(std::move(tree));
    }
  }

  model.metadata_["train_examples"] = std::to_string(examples.size());
  model.metadata_["train_instances"] = std::to_string(n);
  model.metadata_["positives"] = std::to_string(positives);
  return model;
}

std::string tree_select(TreeRanker& model, const RankingExample& example) {
  if (example.candidates.empty())
    throw std::invalid_argument("tree_select: empty candidate set");
  std::vector<Candidate> pool = narrow_by_case(example.candidates, example.original_case);
  if (pool.size() == 1) return pool.front().text;
  std::vector<double> scores = model.score(example, pool);
  return pool[stable_argmax(scores)].text;
}

}  // namespace povshift
