#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace povshift {

// Deterministic RNG used everywhere randomness is needed. splitmix64 core so
// streams are reproducible across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  // Uniform in [0, 1).
  double next_double();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller.
  double normal();
  // Uniform integer in [0, n). n must be > 0.
  size_t next_index(size_t n);
  // Fisher-Yates shuffle of an index permutation.
  void shuffle(std::vector<size_t>& items);
  // Derive an independent child stream.
  Rng fork(uint64_t salt);

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// 64-bit FNV-1a, used for content hashing (embeddings, caches, determinism checks).
uint64_t fnv1a(const std::string& s);
uint64_t hash_combine(uint64_t a, uint64_t b);

std::vector<std::string> split_ws(const std::string& line);
std::vector<std::string> split_char(const std::string& line, char sep);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string lowercase(const std::string& s);
std::string trim(const std::string& s);
bool starts_with(const std::string& s, const std::string& prefix);
bool ends_with(const std::string& s, const std::string& suffix);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::optional<std::string> read_file_if_exists(const std::string& path);

}  // namespace povshift
