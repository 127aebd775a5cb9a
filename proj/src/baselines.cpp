#include "povshift/baselines.hpp"

#include <stdexcept>

#include "povshift/util.hpp"

namespace povshift {

namespace {

std::vector<double> one_hot(size_t n, size_t index) {
  std::vector<double> scores(n, 0.0);
  if (index < n) scores[index] = 1.0;
  return scores;
}

size_t index_of(const std::vector<Candidate>& candidates, const std::string& text) {
  for (size_t i = 0; i < candidates.size(); ++i)
    if (candidates[i].text == text) return i;
  return candidates.size();
}

// Gender and number read off the candidate strings themselves: the first
// gendered pronoun decides. Chains without pronoun candidates stay unknown.
std::pair<Gender, Number> attributes_from_candidates(const std::vector<Candidate>& candidates) {
  for (const Candidate& c : candidates) {
    const PronounInfo* info = lookup_pronoun(lowercase(c.text));
    if (info && info->gender != Gender::unknown) return {info->gender, info->number};
  }
  for (const Candidate& c : candidates) {
    const PronounInfo* info = lookup_pronoun(lowercase(c.text));
    if (info) return {info->gender, info->number};
  }
  return {Gender::unknown, Number::unknown};
}

}  // namespace

std::string random_select(const std::vector<Candidate>& candidates, Rng& rng) {
  if (candidates.empty()) throw std::invalid_argument("random_select: empty candidate set");
  return candidates[rng.next_index(candidates.size())].text;
}

std::string only_pronouns_select(const std::vector<Candidate>& candidates, CaseClass original_case,
                                 GrammaticalRole role, Gender gender, Number number,
                                 bool* fell_back) {
  if (fell_back) *fell_back = false;
  if (candidates.empty())
    throw std::invalid_argument("only_pronouns_select: empty candidate set");
  CaseClass wanted = original_case;
  if (wanted == CaseClass::non_pronominal)
    wanted = role == GrammaticalRole::subject ? CaseClass::nominative : CaseClass::accusative;
  if (auto pronoun = agreement_pronoun(gender, number, wanted)) {
    size_t at = index_of(candidates, *pronoun);
    if (at < candidates.size()) return candidates[at].text;
  }
  if (fell_back) *fell_back = true;
  std::vector<Candidate> narrowed = narrow_by_case(candidates, original_case);
  return narrowed.front().text;
}

std::string most_common_select(const std::vector<Candidate>& candidates,
                               const std::vector<std::string>& gold_strings) {
  if (candidates.empty()) throw std::invalid_argument("most_common_select: empty candidate set");
  size_t best = 0;
  long best_count = -1;
  for (size_t i = 0; i < candidates.size(); ++i) {
    long count = 0;
    for (const std::string& g : gold_strings)
      if (g == candidates[i].text) ++count;
    if (count > best_count) {
      best_count = count;
      best = i;
    }
  }
  return candidates[best].text;
}

std::vector<double> RandomScorer::score(const RankingExample&,
                                        const std::vector<Candidate>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("random_select: empty candidate set");
  return one_hot(candidates.size(), rng_.next_index(candidates.size()));
}

std::vector<double> OnlyPronounsScorer::score(const RankingExample& example,
                                              const std::vector<Candidate>& candidates) {
  Gender gender = Gender::unknown;
  Number number = Number::unknown;
  auto it = attributes_.find(example.chain_id);
  if (it != attributes_.end()) {
    gender = it->second.first;
    number = it->second.second;
  } else {
    auto inferred = attributes_from_candidates(example.candidates);
    gender = inferred.first;
    number = inferred.second;
  }
  bool fell_back = false;
  std::string chosen = only_pronouns_select(candidates, example.original_case, example.role,
                                            gender, number, &fell_back);
  if (fell_back) ++fallbacks_;
  return one_hot(candidates.size(), index_of(candidates, chosen));
}

std::vector<double> MostCommonScorer::score(const RankingExample& example,
                                            const std::vector<Candidate>& candidates) {
  static const std::vector<std::string> kEmpty;
  auto it = gold_by_chain_.find(example.chain_id);
  const std::vector<std::string>& golds = it != gold_by_chain_.end() ? it->second : kEmpty;
  std::string chosen = most_common_select(candidates, golds);
  return one_hot(candidates.size(), index_of(candidates, chosen));
}

std::vector<double> RankerScorer::score(const RankingExample& example,
                                        const std::vector<Candidate>& candidates) {
  return model_.score_candidates(example, candidates, provider_);
}

std::map<int, std::pair<Gender, Number>> chain_attributes(const PreparedConversion& prepared) {
  std::map<int, std::pair<Gender, Number>> attrs;
  for (const CorefChain& chain : prepared.doc.chains) {
    Gender g = chain.id == prepared.focus_chain ? prepared.focus_gender : chain.gender;
    Number n = chain.id == prepared.focus_chain ? Number::singular : chain.number;
    attrs[chain.id] = {g, n};
  }
  return attrs;
}

std::map<int, std::vector<std::string>> gold_strings_by_chain(const PreparedConversion& prepared) {
  std::map<int, std::vector<std::string>> golds;
  for (const MentionSlot& slot : prepared.plan.slots) {
    if (slot.skip) continue;
    golds[slot.chain_id].push_back(slot.gold.empty() ? slot.original : slot.gold);
  }
  return golds;
}

std::map<int, std::vector<std::string>> gold_strings_by_chain(
    const std::vector<RankingExample>& examples) {
  std::map<int, std::vector<std::string>> golds;
  for (const RankingExample& e : examples) golds[e.chain_id].push_back(e.gold);
  return golds;
}

double scorer_selection_accuracy(MentionScorer& scorer,
                                 const std::vector<RankingExample>& examples) {
  long correct = 0, total = 0;
  for (const RankingExample& e : examples) {
    if (e.candidates.empty()) continue;
    std::vector<Candidate> pool =
        scorer.use_case_narrowing() ? narrow_by_case(e.candidates, e.original_case) : e.candidates;
    std::string chosen;
    if (pool.size() == 1) {
      chosen = pool.front().text;
    } else {
      std::vector<double> scores = scorer.score(e, pool);
      chosen = pool[stable_argmax(scores)].text;
    }
    ++total;
    if (chosen == e.gold) ++correct;
  }
  return total > 0 ? static_cast<double>(correct) / total : 0.0;
}

}  // namespace povshift
