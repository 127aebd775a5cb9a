#include "povshift/embedding.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "povshift/util.hpp"

namespace povshift {

std::string HashEmbeddingProvider::version() const {
  return "hash-v1-d" + std::to_string(dimension_);
}

std::vector<Eigen::VectorXd> HashEmbeddingProvider::embed(
    const std::vector<std::string>& tokens) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    Rng rng(fnv1a(lowercase(tok)));
    Eigen::VectorXd v(dimension_);
    for (int i = 0; i < dimension_; ++i) v(i) = rng.uniform(-0.5, 0.5);
    out.push_back(std::move(v));
  }
  return out;
}

double HashEmbeddingProvider::context_fit(const std::vector<std::string>& context,
                                          const std::string& candidate) {
  uint64_t hc = fnv1a(lowercase(join(context, " ")));
  uint64_t hs = fnv1a(lowercase(candidate));
  return -static_cast<double>(std::popcount(hc ^ hs)) / 64.0;
}

CachingProvider::CachingProvider(std::shared_ptr<EmbeddingProvider> inner, std::string cache_dir)
    : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)) {
  if (cache_dir_.empty()) {
    const char* env = std::getenv("POVSHIFT_CACHE");
    if (env) cache_dir_ = env;
  }
  std::string stored =
      cache_dir_.empty() ? std::string() : read_file_if_exists(cache_path()).value_or("");
  if (stored.empty()) return;
  int dim = inner_->dimension();
  for (const std::string& line : split_char(stored, '\n')) {
    size_t tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::vector<std::string> parts = split_char(line.substr(tab + 1), ',');
    if (static_cast<int>(parts.size()) != dim) continue;
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = std::strtod(parts[i].c_str(), nullptr);
    cache_[line.substr(0, tab)] = std::move(v);
  }
}

CachingProvider::~CachingProvider() { flush(); }

std::string CachingProvider::cache_path() const {
  std::string tag = version();
  for (char& c : tag)
    if (c == '/' || c == ' ') c = '_';
  return cache_dir_ + "/emb-" + tag + ".tsv";
}

std::vector<Eigen::VectorXd> CachingProvider::embed(const std::vector<std::string>& tokens) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    auto it = cache_.find(tok);
    if (it == cache_.end()) {
      it = cache_.emplace(tok, inner_->embed({tok})[0]).first;
      dirty_ = true;
    }
    out.push_back(it->second);
  }
  return out;
}

void CachingProvider::flush() {
  if (!dirty_ || cache_dir_.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(cache_dir_, ec);
  std::ostringstream os;
  for (const auto& [tok, v] : cache_) {
    if (tok.find('\t') != std::string::npos || tok.find('\n') != std::string::npos) continue;
    os << tok << '\t';
    for (int i = 0; i < v.size(); ++i) {
      if (i > 0) os << ',';
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", v(i));
      os << buf;
    }
    os << '\n';
  }
  write_file(cache_path(), os.str());
  dirty_ = false;
}

}  // namespace povshift
