#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "povshift/ranker.hpp"
#include "povshift/select.hpp"

namespace povshift {

// Uniform draw from the candidate set. Throws std::invalid_argument when the
// set is empty.
std::string random_select(const std::vector<Candidate>& candidates, Rng& rng);

// Agreement pronoun for the entity in the original mention's case. Originals
// without a pronoun case use nominative for subjects and accusative
// otherwise. When the pronoun is missing from the set the first case-narrowed
// candidate is returned and *fell_back is set.
std::string only_pronouns_select(const std::vector<Candidate>& candidates, CaseClass original_case,
                                 GrammaticalRole role, Gender gender, Number number,
                                 bool* fell_back = nullptr);

// Candidate matching the most frequent string in `gold_strings`; ties and a
// total miss both resolve to the earliest candidate.
std::string most_common_select(const std::vector<Candidate>& candidates,
                               const std::vector<std::string>& gold_strings);

// One-hot scores over a seeded uniform pick.
class RandomScorer : public MentionScorer {
 public:
  explicit RandomScorer(uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  std::vector<double> score(const RankingExample& example,
                            const std::vector<Candidate>& candidates) override;

 private:
  Rng rng_;
};

// Always proposes the agreement pronoun. Gender and number come from the
// per-chain attribute map when present, otherwise from the pronouns in the
// candidate set.
class OnlyPronounsScorer : public MentionScorer {
 public:
  OnlyPronounsScorer() = default;
  explicit OnlyPronounsScorer(std::map<int, std::pair<Gender, Number>> chain_attributes)
      : attributes_(std::move(chain_attributes)) {}
  std::string name() const override { return "pronouns"; }
  std::vector<double> score(const RankingExample& example,
                            const std::vector<Candidate>& candidates) override;
  int fallbacks() const { return fallbacks_; }

 private:
  std::map<int, std::pair<Gender, Number>> attributes_;
  int fallbacks_ = 0;
};

// Oracle that always answers the chain's most frequent gold string; scores
// the full candidate set without case narrowing.
class MostCommonScorer : public MentionScorer {
 public:
  explicit MostCommonScorer(std::map<int, std::vector<std::string>> gold_by_chain)
      : gold_by_chain_(std::move(gold_by_chain)) {}
  std::string name() const override { return "most-common"; }
  bool use_case_narrowing() const override { return false; }
  std::vector<double> score(const RankingExample& example,
                            const std::vector<Candidate>& candidates) override;

 private:
  std::map<int, std::vector<std::string>> gold_by_chain_;
};

// Neural model behind the MentionScorer interface.
class RankerScorer : public MentionScorer {
 public:
  RankerScorer(const TrainedRanker& model, EmbeddingProvider& provider)
      : model_(model), provider_(provider) {}
  std::string name() const override { return "ranker"; }
  std::vector<double> score(const RankingExample& example,
                            const std::vector<Candidate>& candidates) override;

 private:
  const TrainedRanker& model_;
  EmbeddingProvider& provider_;
};

// Gender and number per chain, for the only-pronouns selector.
std::map<int, std::pair<Gender, Number>> chain_attributes(const PreparedConversion& prepared);

// Gold strings per chain, for the most-common selector.
std::map<int, std::vector<std::string>> gold_strings_by_chain(const PreparedConversion& prepared);
std::map<int, std::vector<std::string>> gold_strings_by_chain(
    const std::vector<RankingExample>& examples);

// Fraction of examples whose top-scored candidate equals the gold string,
// with the scorer's own narrowing policy applied. Narrowed singletons are
// taken without scoring, matching select_mentions.
double scorer_selection_accuracy(MentionScorer& scorer,
                                 const std::vector<RankingExample>& examples);

}  // namespace povshift
