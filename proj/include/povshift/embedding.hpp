#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace povshift {

// Source of token vectors. Implementations must be deterministic for a given
// version string and emit vectors of a fixed dimension.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual std::string version() const = 0;
  // One vector per token. The whole sequence is passed so contextual
  // providers can condition on it.
  virtual std::vector<Eigen::VectorXd> embed(const std::vector<std::string>& tokens) = 0;
  // How plausibly the candidate string fits the context tokens, higher is
  // better. Used by the tree-based rankers.
  virtual double context_fit(const std::vector<std::string>& context,
                             const std::string& candidate) = 0;
};

// Deterministic, context-free provider for tests and offline runs. Each
// token's vector is drawn from a generator seeded by the token's hash.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(int dimension = 32) : dimension_(dimension) {}
  int dimension() const override { return dimension_; }
  std::string version() const override;
  std::vector<Eigen::VectorXd> embed(const std::vector<std::string>& tokens) override;
  double context_fit(const std::vector<std::string>& context,
                     const std::string& candidate) override;

 private:
  int dimension_;
};

// Wraps a context-free provider with an in-memory per-token cache that can
// persist to the directory named by cache_dir (defaults to $POVSHIFT_CACHE).
// Cache files are keyed by the inner provider's version.
class CachingProvider : public EmbeddingProvider {
 public:
  explicit CachingProvider(std::shared_ptr<EmbeddingProvider> inner,
                           std::string cache_dir = "");
  ~CachingProvider() override;

  int dimension() const override { return inner_->dimension(); }
  std::string version() const override { return inner_->version(); }
  std::vector<Eigen::VectorXd> embed(const std::vector<std::string>& tokens) override;
  double context_fit(const std::vector<std::string>& context,
                     const std::string& candidate) override {
    return inner_->context_fit(context, candidate);
  }

  void flush();
  size_t cache_size() const { return cache_.size(); }

 private:
  std::string cache_path() const;

  std::shared_ptr<EmbeddingProvider> inner_;
  std::string cache_dir_;
  std::map<std::string, Eigen::VectorXd> cache_;
  bool dirty_ = false;
};

}  // namespace povshift
