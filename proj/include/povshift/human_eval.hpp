#pragma once

#include <string>
#include <vector>

namespace povshift {

// One worker's judgment of one mention: how hard the mention was to resolve
// (0 hard, 1 moderate, 2 easy, or impossible), whether it was mapped to the
// correct entity, and the worker's naturalness rating of the whole sentence
// (0 poor, 1 fair, 2 good), repeated on every row of that sentence.
struct HumanRating {
  std::string worker;
  std::string sentence;
  std::string mention;
  int amb = 0;
  bool impossible = false;
  bool correct = false;
  int nat = 0;
  bool operator==(const HumanRating&) const = default;
};

// CSV with header `worker,sentence,mention,amb,correct,nat`; amb is 0, 1, 2,
// or "impossible"; correct is 0/1. Throws std::invalid_argument naming the
// offending line on malformed input.
std::vector<HumanRating> parse_ratings_csv(const std::string& text);
std::vector<HumanRating> load_ratings_csv(const std::string& path);

// Mean over the mentions of amb * (+1 if correct, -1 otherwise), with
// impossible mentions contributing -2 directly. Bounded in [-2, 2]. Throws
// std::invalid_argument on an empty rating list.
double referential_score(const std::vector<HumanRating>& worker_sentence_ratings);

struct SentenceScores {
  std::string sentence;
  double referential = 0.0;  // worker-averaged
  double naturalness = 0.0;  // worker-averaged
  int workers = 0;
};

struct HumanEvalReport {
  std::vector<SentenceScores> sentences;  // sorted by sentence id
  double mean_referential = 0.0;          // mean over sentences, in [-2, 2]
  double mean_naturalness = 0.0;          // mean over sentences, in [0, 2]
  double referential_percent = 0.0;       // [-2, 2] mapped to [0, 100]
  double naturalness_percent = 0.0;       // [0, 2] mapped to [0, 100]
};

// Per-sentence referential and naturalness scores averaged over workers,
// then averaged over sentences.
HumanEvalReport score_human_eval(const std::vector<HumanRating>& ratings);

// Linear map of [lo, hi] onto [0, 100].
double scale_to_percent(double score, double lo, double hi);

// CSV `sentence,referential,naturalness,workers`, one row per sentence.
std::string human_eval_scatter_csv(const HumanEvalReport& report);

// CSV `metric,value` summary rows.
std::string human_eval_summary_csv(const HumanEvalReport& report);

}  // namespace povshift
