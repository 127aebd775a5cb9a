#pragma once

#include <cstdint>
#include <vector>

#include "povshift/core.hpp"

namespace povshift {

struct SynthConfig {
  int n_docs = 20;
  int min_sentences = 8;
  int max_sentences = 14;
  double p_same_entity = 0.5;  // next sentence keeps the current subject
  double p_cue = 0.35;         // sentence opens with a discourse cue
  uint64_t seed = 7;
  bool operator==(const SynthConfig&) const = default;
};

// Deterministic corpus of short third-person narratives with two person
// chains and one subject mention per sentence. Mention strings follow a
// fixed style policy: full name on a chain's first mention, given name after
// a discourse cue ("Meanwhile", "Later") or an entity switch, and a pronoun
// when the previous sentence covered the same entity. Sentences are long
// enough that the previous mention sits more than ten tokens back, so the
// policy is recoverable from mention-level context but not from short token
// windows alone.
std::vector<Document> generate_corpus(const SynthConfig& cfg);

}  // namespace povshift
