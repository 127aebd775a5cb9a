#include "povshift/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "povshift/container.hpp"
#include "povshift/lexicon.hpp"
#include "povshift/util.hpp"

namespace povshift {

using nlohmann::json;

int distance_bucket(int dist) {
  if (dist <= 5) return 0;
  if (dist <= 10) return 1;
  if (dist <= 15) return 2;
  if (dist <= 20) return 3;
  if (dist <= 25) return 4;
  return 5;
}

Eigen::VectorXd mention_binary_features(bool own, int dist) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(kMentionFeatureDim);
  f(0) = own ? 1.0 : 0.0;
  f(1 + distance_bucket(dist)) = 1.0;
  return f;
}

Eigen::VectorXd candidate_binary_features(const RankingExample& e, const Candidate& c) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(kCandidateFeatureDim);
  if (e.mention_index <= 1) f(0) = 1.0;
  int len = static_cast<int>(split_ws(c.text).size());
  if (len < 1) len = 1;
  f(std::min(len, 6)) = 1.0;
  for (const std::string& s : e.prior_strings)
    if (s == c.text) f(7) = 1.0;
  if (!e.previous_string.empty() && c.text == e.previous_string) f(8) = 1.0;
  if (e.role != GrammaticalRole::other) f(9) = 1.0;
  return f;
}

namespace {

int special_index(const std::string& tok) {
  if (tok == kPadToken) return 0;
  if (tok == kSepToken) return 1;
  if (tok == kUnkToken) return 2;
  return -1;
}

json config_to_json(const ModelConfig& c) {
  json j;
  j["n_tokens"] = c.n_tokens;
  j["k_mentions"] = c.k_mentions;
  j["lstm_hidden"] = c.lstm_hidden;
  j["mlp_hidden"] = c.mlp_hidden;
  j["embedding_dim"] = c.embedding_dim;
  j["margin"] = c.margin;
  j["learning_rate"] = c.learning_rate;
  j["dropout"] = c.dropout;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["seed"] = c.seed;
  j["use_token_lstm"] = c.use_token_lstm;
  j["use_mention_lstm"] = c.use_mention_lstm;
  j["use_phi_t"] = c.use_phi_t;
  j["use_phi_b"] = c.use_phi_b;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.n_tokens = j.value("n_tokens", c.n_tokens);
  c.k_mentions = j.value("k_mentions", c.k_mentions);
  c.lstm_hidden = j.value("lstm_hidden", c.lstm_hidden);
  c.mlp_hidden = j.value("mlp_hidden", c.mlp_hidden);
  c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
  c.margin = j.value("margin", c.margin);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.dropout = j.value("dropout", c.dropout);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.patience = j.value("patience", c.patience);
  c.seed = j.value("seed", c.seed);
  c.use_token_lstm = j.value("use_token_lstm", c.use_token_lstm);
  c.use_mention_lstm = j.value("use_mention_lstm", c.use_mention_lstm);
  c.use_phi_t = j.value("use_phi_t", c.use_phi_t);
  c.use_phi_b = j.value("use_phi_b", c.use_phi_b);
  return c;
}

}  // namespace

struct TrainedRanker::Assembled {
  std::vector<Eigen::VectorXd> tl, tr, ml, mr;
  std::vector<int> tl_special, tr_special, ml_special, mr_special;
  Eigen::VectorXd phi_t_cur;  // current-slot bits when the mention encoder is off
  Eigen::VectorXd phi_b;
};

struct TrainedRanker::Traces {
  LstmTrace tl, tr, ml, mr;
  Eigen::VectorXd tanh_out;
};

TrainedRanker::TrainedRanker(const ModelConfig& config, const std::string& provider_version)
    : config_(config), provider_version_(provider_version) {
  if (!config.use_token_lstm && !config.use_mention_lstm)
    throw std::invalid_argument("at least one of the token and mention encoders must be enabled");
  Rng rng(config.seed);
  const int d = config.embedding_dim;
  const int h = config.lstm_hidden;
  if (config.use_token_lstm) {
    tok_left_.init(d, h, rng);
    tok_right_.init(d, h, rng);
  }
  if (config.use_mention_lstm) {
    int md = d + (config.use_phi_t ? kMentionFeatureDim : 0);
    men_left_.init(md, h, rng);
    men_right_.init(md, h, rng);
  }
  auto init_vec = [&](Eigen::VectorXd& v) {
    v.resize(d);
    for (int i = 0; i < d; ++i) v(i) = rng.uniform(-0.5, 0.5);
  };
  init_vec(emb_pad_);
  init_vec(emb_sep_);
  init_vec(emb_unk_);

  const int fd = feature_dim();
  double rw = 1.0 / std::sqrt(static_cast<double>(fd));
  score_W_.resize(config.mlp_hidden, fd);
  for (long i = 0; i < score_W_.size(); ++i) score_W_.data()[i] = rng.uniform(-rw, rw);
  score_b_ = Eigen::VectorXd::Zero(config.mlp_hidden);
  double rv = 1.0 / std::sqrt(static_cast<double>(config.mlp_hidden));
  score_v_.resize(config.mlp_hidden);
  for (int i = 0; i < config.mlp_hidden; ++i) score_v_(i) = rng.uniform(-rv, rv);
  zero_grads();
}

int TrainedRanker::feature_dim() const {
  int fd = 0;
  if (config_.use_token_lstm) fd += 2 * config_.lstm_hidden;
  if (config_.use_mention_lstm) fd += 2 * config_.lstm_hidden;
  if (!config_.use_mention_lstm && config_.use_phi_t) fd += kMentionFeatureDim;
  if (config_.use_phi_b) fd += kCandidateFeatureDim;
  return fd;
}

std::vector<ParamView> TrainedRanker::params() {
  std::vector<ParamView> out;
  if (config_.use_token_lstm) {
    tok_left_.views("tok_left", out);
    tok_right_.views("tok_right", out);
  }
  if (config_.use_mention_lstm) {
    men_left_.views("men_left", out);
    men_right_.views("men_right", out);
  }
  out.push_back({"emb.pad", emb_pad_.data(), d_emb_pad_.data(), emb_pad_.size()});
  out.push_back({"emb.sep", emb_sep_.data(), d_emb_sep_.data(), emb_sep_.size()});
  out.push_back({"emb.unk", emb_unk_.data(), d_emb_unk_.data(), emb_unk_.size()});
  out.push_back({"score.W", score_W_.data(), d_score_W_.data(), score_W_.size()});
  out.push_back({"score.b", score_b_.data(), d_score_b_.data(), score_b_.size()});
  out.push_back({"score.v", score_v_.data(), d_score_v_.data(), score_v_.size()});
  return out;
}

void TrainedRanker::zero_grads() {
  if (config_.use_token_lstm) {
    tok_left_.zero_grad();
    tok_right_.zero_grad();
  }
  if (config_.use_mention_lstm) {
    men_left_.zero_grad();
    men_right_.zero_grad();
  }
  d_emb_pad_ = Eigen::VectorXd::Zero(emb_pad_.size());
  d_emb_sep_ = Eigen::VectorXd::Zero(emb_sep_.size());
  d_emb_unk_ = Eigen::VectorXd::Zero(emb_unk_.size());
  d_score_W_ = Eigen::MatrixXd::Zero(score_W_.rows(), score_W_.cols());
  d_score_b_ = Eigen::VectorXd::Zero(score_b_.size());
  d_score_v_ = Eigen::VectorXd::Zero(score_v_.size());
}

std::vector<double> TrainedRanker::flat_params() const {
  std::vector<double> flat;
  for (const ParamView& p : const_cast<TrainedRanker*>(this)->params())
    flat.insert(flat.end(), p.value, p.value + p.size);
  return flat;
}

void TrainedRanker::set_flat_params(const std::vector<double>& flat) {
  size_t pos = 0;
  for (const ParamView& p : params()) {
    if (pos + p.size > flat.size()) throw std::invalid_argument("parameter vector too short");
    std::copy(flat.begin() + pos, flat.begin() + pos + p.size, p.value);
    pos += p.size;
  }
}

std::vector<double> TrainedRanker::flat_grads() const {
  std::vector<double> flat;
  for (const ParamView& p : const_cast<TrainedRanker*>(this)->params())
    flat.insert(flat.end(), p.grad, p.grad + p.size);
  return flat;
}

TrainedRanker::Assembled TrainedRanker::assemble(const RankingExample& e, const Candidate& c,
                                                 EmbeddingProvider& provider) const {
  const int d = config_.embedding_dim;
  std::vector<std::string> cand_tokens = split_ws(c.text);
  if (cand_tokens.empty()) cand_tokens.push_back(kUnkToken);

  auto embed_seq = [&](const std::vector<std::string>& toks, std::vector<int>& special) {
    std::vector<Eigen::VectorXd> vecs = provider.embed(toks);
    special.resize(toks.size());
    for (size_t i = 0; i < toks.size(); ++i) {
      special[i] = special_index(toks[i]);
      if (special[i] == 0) vecs[i] = emb_pad_;
      if (special[i] == 1) vecs[i] = emb_sep_;
      if (special[i] == 2) vecs[i] = emb_unk_;
      if (vecs[i].size() != d)
        throw std::runtime_error("embedding provider returned dimension " +
                                 std::to_string(vecs[i].size()) + ", model expects " +
                                 std::to_string(d));
    }
    return vecs;
  };

  Assembled a;
  if (config_.use_token_lstm) {
    if (static_cast<int>(e.left_tokens.size()) != config_.n_tokens ||
        static_cast<int>(e.right_tokens.size()) != config_.n_tokens)
      throw std::invalid_argument("token window length " + std::to_string(e.left_tokens.size()) +
                                  "/" + std::to_string(e.right_tokens.size()) + ", expected " +
                                  std::to_string(config_.n_tokens));
    std::vector<std::string> left = e.left_tokens;
    left.insert(left.end(), cand_tokens.begin(), cand_tokens.end());
    std::vector<std::string> right(e.right_tokens.rbegin(), e.right_tokens.rend());
    a.tl = embed_seq(left, a.tl_special);
    a.tr = embed_seq(right, a.tr_special);
  }

  if (config_.use_mention_lstm) {
    if (static_cast<int>(e.left_mentions.size()) != config_.k_mentions ||
        static_cast<int>(e.right_mentions.size()) != config_.k_mentions)
      throw std::invalid_argument("mention window length " +
                                  std::to_string(e.left_mentions.size()) + "/" +
                                  std::to_string(e.right_mentions.size()) + ", expected " +
                                  std::to_string(config_.k_mentions));
    std::vector<std::string> left_toks, right_toks;
    std::vector<Eigen::VectorXd> left_feats, right_feats;
    Eigen::VectorXd zero_feat = Eigen::VectorXd::Zero(kMentionFeatureDim);
    auto push_group = [&](std::vector<std::string>& toks, std::vector<Eigen::VectorXd>& feats,
                          const ExampleMention& m) {
      bool is_pad = m.tokens.size() == 1 && m.tokens[0] == kPadToken;
      Eigen::VectorXd f = is_pad ? zero_feat : mention_binary_features(m.own, m.dist);
      for (const std::string& t : m.tokens) {
        toks.push_back(t);
        feats.push_back(f);
      }
    };
    for (const ExampleMention& m : e.left_mentions) {
      push_group(left_toks, left_feats, m);
      left_toks.push_back(kSepToken);
      left_feats.push_back(zero_feat);
    }
    Eigen::VectorXd cand_feat = mention_binary_features(true, 0);
    for (const std::string& t : cand_tokens) {
      left_toks.push_back(t);
      left_feats.push_back(cand_feat);
    }
    for (size_t i = 0; i < e.right_mentions.size(); ++i) {
      if (i > 0) {
        right_toks.push_back(kSepToken);
        right_feats.push_back(zero_feat);
      }
      push_group(right_toks, right_feats, e.right_mentions[i]);
    }
    std::reverse(right_toks.begin(), right_toks.end());
    std::reverse(right_feats.begin(), right_feats.end());

    a.ml = embed_seq(left_toks, a.ml_special);
    a.mr = embed_seq(right_toks, a.mr_special);
    if (config_.use_phi_t) {
      for (size_t i = 0; i < a.ml.size(); ++i) {
        Eigen::VectorXd x(d + kMentionFeatureDim);
        x << a.ml[i], left_feats[i];
        a.ml[i] = std::move(x);
      }
      for (size_t i = 0; i < a.mr.size(); ++i) {
        Eigen::VectorXd x(d + kMentionFeatureDim);
        x << a.mr[i], right_feats[i];
        a.mr[i] = std::move(x);
      }
    }
  } else if (config_.use_phi_t) {
    a.phi_t_cur = mention_binary_features(true, 0);
  }

  if (config_.use_phi_b) a.phi_b = candidate_binary_features(e, c);
  return a;
}

double TrainedRanker::score_assembled(const Assembled& a, Eigen::VectorXd* phi_out, Traces* traces,
                                      const Eigen::VectorXd* dropout_mask) const {
  Eigen::VectorXd phi(feature_dim());
  const int h = config_.lstm_hidden;
  int pos = 0;
  if (config_.use_token_lstm) {
    phi.segment(pos, h) = lstm_forward(tok_left_, a.tl, traces ? &traces->tl : nullptr);
    phi.segment(pos + h, h) = lstm_forward(tok_right_, a.tr, traces ? &traces->tr : nullptr);
    pos += 2 * h;
  }
  if (config_.use_mention_lstm) {
    phi.segment(pos, h) = lstm_forward(men_left_, a.ml, traces ? &traces->ml : nullptr);
    phi.segment(pos + h, h) = lstm_forward(men_right_, a.mr, traces ? &traces->mr : nullptr);
    pos += 2 * h;
  } else if (config_.use_phi_t) {
    phi.segment(pos, kMentionFeatureDim) = a.phi_t_cur;
    pos += kMentionFeatureDim;
  }
  if (config_.use_phi_b) {
    phi.segment(pos, kCandidateFeatureDim) = a.phi_b;
    pos += kCandidateFeatureDim;
  }
  if (dropout_mask) phi = phi.cwiseProduct(*dropout_mask);

  Eigen::VectorXd t = (score_W_ * phi + score_b_).array().tanh();
  if (traces) traces->tanh_out = t;
  if (phi_out) *phi_out = phi;
  return score_v_.dot(t);
}

void TrainedRanker::backward(const Assembled& a, const Traces& traces, const Eigen::VectorXd& phi,
                             double dscore, const Eigen::VectorXd* dropout_mask) {
  d_score_v_ += dscore * traces.tanh_out;
  Eigen::VectorXd dpre =
      dscore * score_v_.cwiseProduct((1.0 - traces.tanh_out.array().square()).matrix());
  d_score_W_ += dpre * phi.transpose();
  d_score_b_ += dpre;
  Eigen::VectorXd dphi = score_W_.transpose() * dpre;
  if (dropout_mask) dphi = dphi.cwiseProduct(*dropout_mask);

  const int d = config_.embedding_dim;
  const int h = config_.lstm_hidden;
  int pos = 0;
  auto feed_special = [&](const std::vector<Eigen::VectorXd>& dxs,
                          const std::vector<int>& special) {
    for (size_t i = 0; i < dxs.size(); ++i) {
      if (special[i] < 0) continue;
      Eigen::VectorXd dx = dxs[i].head(d);
      if (special[i] == 0) d_emb_pad_ += dx;
      if (special[i] == 1) d_emb_sep_ += dx;
      if (special[i] == 2) d_emb_unk_ += dx;
    }
  };
  if (config_.use_token_lstm) {
    feed_special(lstm_backward(tok_left_, traces.tl, dphi.segment(pos, h)), a.tl_special);
    feed_special(lstm_backward(tok_right_, traces.tr, dphi.segment(pos + h, h)), a.tr_special);
    pos += 2 * h;
  }
  if (config_.use_mention_lstm) {
    feed_special(lstm_backward(men_left_, traces.ml, dphi.segment(pos, h)), a.ml_special);
    feed_special(lstm_backward(men_right_, traces.mr, dphi.segment(pos + h, h)), a.mr_special);
    pos += 2 * h;
  }
}

std::vector<double> TrainedRanker::score_candidates(const RankingExample& e,
                                                    const std::vector<Candidate>& candidates,
                                                    EmbeddingProvider& provider) const {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const Candidate& c : candidates)
    scores.push_back(score_assembled(assemble(e, c, provider), nullptr, nullptr, nullptr));
  return scores;
}

double TrainedRanker::loss_and_gradients(const RankingExample& e, EmbeddingProvider& provider,
                                         Rng* dropout_rng) {
  if (e.candidates.size() < 2) return 0.0;
  int gold = -1;
  for (size_t i = 0; i < e.candidates.size(); ++i)
    if (e.candidates[i].text == e.gold) gold = static_cast<int>(i);
  if (gold < 0) return 0.0;

  Eigen::VectorXd mask;
  const Eigen::VectorXd* maskp = nullptr;
  if (dropout_rng && config_.dropout > 0.0) {
    const double keep = 1.0 - config_.dropout;
    mask.resize(feature_dim());
    for (int i = 0; i < mask.size(); ++i)
      mask(i) = dropout_rng->next_double() < config_.dropout ? 0.0 : 1.0 / keep;
    maskp = &mask;
  }

  const size_t n = e.candidates.size();
  std::vector<Assembled> assembled(n);
  std::vector<Traces> traces(n);
  std::vector<Eigen::VectorXd> phis(n);
  std::vector<double> scores(n);
  for (size_t i = 0; i < n; ++i) {
    assembled[i] = assemble(e, e.candidates[i], provider);
    scores[i] = score_assembled(assembled[i], &phis[i], &traces[i], maskp);
  }

  double loss = 0.0;
  double dgold = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (static_cast<int>(i) == gold) continue;
    double margin_term = config_.margin - scores[gold] + scores[i];
    if (margin_term > 0.0) {
      loss += margin_term;
      backward(assembled[i], traces[i], phis[i], 1.0, maskp);
      dgold -= 1.0;
    }
  }
  if (dgold != 0.0) backward(assembled[gold], traces[gold], phis[gold], dgold, maskp);
  return loss;
}

double TrainedRanker::train_step(const RankingExample& e, EmbeddingProvider& provider,
                                 AdamOptimizer& opt, Rng& dropout_rng) {
  zero_grads();
  double loss = loss_and_gradients(e, provider, &dropout_rng);
  if (loss > 0.0) opt.step(params());
  return loss;
}

double TrainedRanker::example_loss(const RankingExample& e, EmbeddingProvider& provider) const {
  if (e.candidates.size() < 2) return 0.0;
  int gold = -1;
  for (size_t i = 0; i < e.candidates.size(); ++i)
    if (e.candidates[i].text == e.gold) gold = static_cast<int>(i);
  if (gold < 0) return 0.0;
  std::vector<double> scores = score_candidates(e, e.candidates, provider);
  std::vector<double> others;
  for (size_t i = 0; i < scores.size(); ++i)
    if (static_cast<int>(i) != gold) others.push_back(scores[i]);
  return ranking_loss(scores[gold], others, config_.margin);
}

double TrainedRanker::selection_accuracy(const std::vector<RankingExample>& examples,
                                         EmbeddingProvider& provider, bool narrow) const {
  long correct = 0, total = 0;
  for (const RankingExample& e : examples) {
    if (e.candidates.empty()) continue;
    std::vector<Candidate> cands =
        narrow ? narrow_by_case(e.candidates, e.original_case) : e.candidates;
    const Candidate* chosen;
    if (cands.size() == 1) {
      chosen = &cands[0];
    } else {
      std::vector<double> scores = score_candidates(e, cands, provider);
      chosen = &cands[stable_argmax(scores)];
    }
    if (chosen->text == e.gold) ++correct;
    ++total;
  }
  return total > 0 ? static_cast<double>(correct) / total : 0.0;
}

std::string TrainedRanker::serialize() const {
  auto views = const_cast<TrainedRanker*>(this)->params();
  json header;
  header["type"] = "ranker";
  header["config"] = config_to_json(config_);
  header["provider_version"] = provider_version_;
  header["metadata"] = metadata_;
  std::vector<ModelBlock> blocks;
  for (const ParamView& p : views) {
    ModelBlock b;
    b.name = p.name;
    b.values.assign(p.value, p.value + p.size);
    blocks.push_back(std::move(b));
  }
  return pack_model(header, blocks);
}

TrainedRanker TrainedRanker::deserialize(const std::string& bytes) {
  std::vector<ModelBlock> blocks;
  json header = unpack_model(bytes, &blocks);

  std::string type = header.value("type", "ranker");
  if (type != "ranker")
    throw std::runtime_error("model file contains a '" + type + "' model, expected 'ranker'");
  TrainedRanker model(config_from_json(header.at("config")),
                      header.value("provider_version", ""));
  if (header.contains("metadata"))
    model.metadata_ = header.at("metadata").get<std::map<std::string, std::string>>();

  std::map<std::string, ParamView> by_name;
  for (const ParamView& p : model.params()) by_name[p.name] = p;
  for (const ModelBlock& b : blocks) {
    auto it = by_name.find(b.name);
    if (it == by_name.end())
      throw std::runtime_error("model block '" + b.name + "' does not fit the stored config");
    if (it->second.size != static_cast<long>(b.values.size()))
      throw std::runtime_error("model block '" + b.name + "' has size " +
                               std::to_string(b.values.size()) + ", expected " +
                               std::to_string(it->second.size));
    std::memcpy(it->second.value, b.values.data(), b.values.size() * sizeof(double));
  }
  return model;
}

void TrainedRanker::save(const std::string& path) const { write_file(path, serialize()); }

TrainedRanker TrainedRanker::load(const std::string& path, const std::string& expected_provider,
                                  bool force) {
  TrainedRanker model = deserialize(read_file(path));
  if (!expected_provider.empty() && model.provider_version_ != expected_provider && !force)
    throw std::runtime_error("model was trained with embedding provider '" +
                             model.provider_version_ + "' but the current provider is '" +
                             expected_provider + "'; pass --force to load anyway");
  return model;
}

TrainedRanker train_ranker(const std::vector<RankingExample>& train,
                           const std::vector<RankingExample>& dev, const ModelConfig& config,
                           EmbeddingProvider& provider, TrainReport* report) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  ModelConfig cfg = config;
  cfg.embedding_dim = provider.dimension();
  TrainedRanker model(cfg, provider.version());
  AdamOptimizer opt(cfg.learning_rate);
  Rng shuffle_rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 1);
  Rng dropout_rng(cfg.seed * 0xbf58476d1ce4e5b9ULL + 2);
  const std::vector<RankingExample>& dev_set = dev.empty() ? train : dev;

  TrainedRanker best = model;
  double best_acc = -1.0;
  int best_epoch = -1;
  int epochs_without_gain = 0;
  int epochs_run = 0;

  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double total_loss = 0.0;
    for (size_t idx : order) total_loss += model.train_step(train[idx], provider, opt, dropout_rng);
    ++epochs_run;
    double acc = model.selection_accuracy(dev_set, provider, true);
    if (report) {
      report->epoch_losses.push_back(total_loss);
      report->epoch_dev_accuracy.push_back(acc);
    }
    if (acc > best_acc) {
      best = model;
      best_acc = acc;
      best_epoch = epoch;
      epochs_without_gain = 0;
    } else {
      ++epochs_without_gain;
    }
    if (epochs_without_gain >= cfg.patience) break;
    if (total_loss == 0.0) break;  // every margin satisfied; parameters are frozen
  }

  best.metadata()["train_examples"] = std::to_string(train.size());
  best.metadata()["epochs_run"] = std::to_string(epochs_run);
  best.metadata()["best_epoch"] = std::to_string(best_epoch);
  char acc_buf[32];
  std::snprintf(acc_buf, sizeof(acc_buf), "%.6f", best_acc);
  best.metadata()["best_dev_accuracy"] = acc_buf;
  if (report) {
    report->epochs_run = epochs_run;
    report->best_epoch = best_epoch;
    report->best_dev_accuracy = best_acc;
  }
  return best;
}

TrainedRanker grid_search_train(const std::vector<RankingExample>& train,
                                const std::vector<RankingExample>& dev,
                                const ModelConfig& base_config, EmbeddingProvider& provider,
                                std::vector<GridResult>* results, int jobs) {
  const double margins[] = {0.1, 0.2, 0.5};
  const double rates[] = {1e-3, 3e-4};
  const double dropouts[] = {0.0, 0.2, 0.5};
  std::vector<ModelConfig> grid;
  for (double m : margins)
    for (double lr : rates)
      for (double dr : dropouts) {
        ModelConfig c = base_config;
        c.margin = m;
        c.learning_rate = lr;
        c.dropout = dr;
        grid.push_back(c);
      }

  std::vector<TrainedRanker> models(grid.size());
  std::vector<double> accs(grid.size(), 0.0);
  const std::vector<RankingExample>& dev_set = dev.empty() ? train : dev;

  auto run_range = [&](size_t from, size_t to) {
    for (size_t i = from; i < to && i < grid.size(); ++i) {
      models[i] = train_ranker(train, dev, grid[i], provider);
      accs[i] = models[i].selection_accuracy(dev_set, provider, true);
    }
  };
  int n_jobs = std::max(1, jobs);
  if (n_jobs <= 1) {
    run_range(0, grid.size());
  } else {
    size_t per = (grid.size() + n_jobs - 1) / n_jobs;
    std::vector<std::thread> threads;
    for (int j = 0; j < n_jobs; ++j) threads.emplace_back(run_range, j * per, (j + 1) * per);
    for (std::thread& t : threads) t.join();
  }

  size_t best = stable_argmax(accs);
  if (results) {
    results->clear();
    for (size_t i = 0; i < grid.size(); ++i) results->push_back({grid[i], accs[i]});
  }
  return models[best];
}

GradCheckResult gradient_check(const ModelConfig& config, EmbeddingProvider& provider,
                               const RankingExample& example, int draws, uint64_t seed) {
  GradCheckResult result;
  const double eps = 1e-6;
  for (int draw = 0; draw < draws; ++draw) {
    ModelConfig c = config;
    c.embedding_dim = provider.dimension();
    c.dropout = 0.0;
    c.seed = seed + static_cast<uint64_t>(draw);
    TrainedRanker model(c, provider.version());

    // Skip parameter draws whose hinge terms sit near the kink, where the
    // two-sided difference quotient is not comparable to the subgradient.
    std::vector<double> scores = model.score_candidates(example, example.candidates, provider);
    int gold = -1;
    for (size_t i = 0; i < example.candidates.size(); ++i)
      if (example.candidates[i].text == example.gold) gold = static_cast<int>(i);
    if (gold < 0) continue;
    bool near_kink = false;
    for (size_t i = 0; i < scores.size(); ++i) {
      if (static_cast<int>(i) == gold) continue;
      if (std::abs(c.margin - scores[gold] + scores[i]) < 1e-3) near_kink = true;
    }
    if (near_kink) {
      ++result.skipped_draws;
      continue;
    }

    model.zero_grads();
    model.loss_and_gradients(example, provider);
    std::vector<double> analytic = model.flat_grads();
    std::vector<double> theta = model.flat_params();

    for (size_t i = 0; i < theta.size(); ++i) {
      std::vector<double> probe = theta;
      probe[i] = theta[i] + eps;
      model.set_flat_params(probe);
      double up = model.example_loss(example, provider);
      probe[i] = theta[i] - eps;
      model.set_flat_params(probe);
      double down = model.example_loss(example, provider);
      double numeric = (up - down) / (2.0 * eps);
      double rel = std::abs(analytic[i] - numeric) /
                   std::max({std::abs(analytic[i]), std::abs(numeric), 1e-3});
      result.max_rel_error = std::max(result.max_rel_error, rel);
      ++result.comparisons;
    }
    model.set_flat_params(theta);
  }
  return result;
}

}  // namespace povshift
