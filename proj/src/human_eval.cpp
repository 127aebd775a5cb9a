#include "povshift/human_eval.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>

#include "povshift/util.hpp"

namespace povshift {

namespace {

int parse_int_field(const std::string& value, int lo, int hi, const std::string& field,
                    size_t line_no) {
  try {
    size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size() || v < lo || v > hi) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("ratings line " + std::to_string(line_no) + ": bad " + field +
                                " value '" + value + "'");
  }
}

}  // namespace

std::vector<HumanRating> parse_ratings_csv(const std::string& text) {
  std::vector<std::string> lines = split_char(text, '\n');
  if (lines.empty() || trim(lines[0]) != "worker,sentence,mention,amb,correct,nat")
    throw std::invalid_argument(
        "ratings line 1: expected header 'worker,sentence,mention,amb,correct,nat'");
  std::vector<HumanRating> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty()) continue;
    std::vector<std::string> fields = split_char(line, ',');
    if (fields.size() != 6)
      throw std::invalid_argument("ratings line " + std::to_string(i + 1) + ": expected 6 fields, got " +
                                  std::to_string(fields.size()));
    HumanRating r;
    r.worker = trim(fields[0]);
    r.sentence = trim(fields[1]);
    r.mention = trim(fields[2]);
    std::string amb = trim(fields[3]);
    if (amb == "impossible") {
      r.impossible = true;
    } else {
      r.amb = parse_int_field(amb, 0, 2, "amb", i + 1);
      r.correct = parse_int_field(trim(fields[4]), 0, 1, "correct", i + 1) == 1;
    }
    r.nat = parse_int_field(trim(fields[5]), 0, 2, "nat", i + 1);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<HumanRating> load_ratings_csv(const std::string& path) {
  return parse_ratings_csv(read_file(path));
}

double referential_score(const std::vector<HumanRating>& worker_sentence_ratings) {
  if (worker_sentence_ratings.empty())
    throw std::invalid_argument("referential_score: no ratings");
  double sum = 0.0;
  for (const HumanRating& r : worker_sentence_ratings)
    sum += r.impossible ? -2.0 : r.amb * (r.correct ? 1.0 : -1.0);
  return sum / static_cast<double>(worker_sentence_ratings.size());
}

HumanEvalReport score_human_eval(const std::vector<HumanRating>& ratings) {
  // sentence -> worker -> that worker's rows for the sentence
  std::map<std::string, std::map<std::string, std::vector<HumanRating>>> grouped;
  for (const HumanRating& r : ratings) grouped[r.sentence][r.worker].push_back(r);

  HumanEvalReport report;
  for (const auto& [sentence, by_worker] : grouped) {
    double ref_sum = 0.0, nat_sum = 0.0;
    for (const auto& [worker, rows] : by_worker) {
      ref_sum += referential_score(rows);
      double nat = 0.0;
      for (const HumanRating& r : rows) nat += r.nat;
      nat_sum += nat / static_cast<double>(rows.size());
    }
    SentenceScores s;
    s.sentence = sentence;
    s.workers = static_cast<int>(by_worker.size());
    s.referential = ref_sum / s.workers;
    s.naturalness = nat_sum / s.workers;
    report.sentences.push_back(std::move(s));
  }

  if (!report.sentences.empty()) {
    double ref = 0.0, nat = 0.0;
    for (const SentenceScores& s : report.sentences) {
      ref += s.referential;
      nat += s.naturalness;
    }
    report.mean_referential = ref / report.sentences.size();
    report.mean_naturalness = nat / report.sentences.size();
  }
  report.referential_percent = scale_to_percent(report.mean_referential, -2.0, 2.0);
  report.naturalness_percent = scale_to_percent(report.mean_naturalness, 0.0, 2.0);
  return report;
}

double scale_to_percent(double score, double lo, double hi) {
  return (score - lo) / (hi - lo) * 100.0;
}

std::string human_eval_scatter_csv(const HumanEvalReport& report) {
  std::string out = "sentence,referential,naturalness,workers\n";
  char buf[160];
  for (const SentenceScores& s : report.sentences) {
    std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%d\n", s.sentence.c_str(), s.referential,
                  s.naturalness, s.workers);
    out += buf;
  }
  return out;
}

std::string human_eval_summary_csv(const HumanEvalReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "metric,value\nmean_referential,%.4f\nmean_naturalness,%.4f\n"
                "referential_percent,%.1f\nnaturalness_percent,%.1f\nsentences,%zu\n",
                report.mean_referential, report.mean_naturalness, report.referential_percent,
                report.naturalness_percent, report.sentences.size());
  return buf;
}

}  // namespace povshift
