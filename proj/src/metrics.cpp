#include "povshift/metrics.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "povshift/util.hpp"

namespace povshift {

namespace {

struct SlotWords {
  std::vector<std::string> original;
  std::vector<std::string> predicted;
  std::vector<std::string> gold;
  bool has_predicted = false;
  bool has_gold = false;
};

const std::string& word_at(const std::vector<std::string>& words, size_t i) {
  static const std::string kEmpty;
  return i < words.size() ? words[i] : kEmpty;
}

ScoreReport count_overlap(const std::set<int>& predicted, const std::set<int>& gold) {
  long correct = 0;
  for (int p : predicted)
    if (gold.count(p)) ++correct;
  return report_from_counts(static_cast<long>(predicted.size()), correct,
                            static_cast<long>(gold.size()));
}

std::string format_row(const std::string& label, const ScoreReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%ld,%ld,%ld\n", label.c_str(), r.precision,
                r.recall, r.f1, r.n_changed, r.n_correct, r.n_gold);
  return buf;
}

}  // namespace

ScoreReport report_from_counts(long n_changed, long n_correct, long n_gold) {
  ScoreReport r;
  r.n_changed = n_changed;
  r.n_correct = n_correct;
  r.n_gold = n_gold;
  r.precision = n_changed > 0 ? static_cast<double>(n_correct) / n_changed : 0.0;
  r.recall = n_gold > 0 ? static_cast<double>(n_correct) / n_gold : 0.0;
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                                      : 0.0;
  return r;
}

ScoreReport score_conversion(const ConversionResult& predicted, const ConversionResult& gold) {
  if (predicted.doc_id != gold.doc_id)
    throw std::invalid_argument("score_conversion: document mismatch ('" + predicted.doc_id +
                                "' vs '" + gold.doc_id + "')");

  std::map<std::tuple<int, int, int>, SlotWords> slots;
  auto mention_key = [](const MentionEdit& e) { return std::make_tuple(0, e.chain_id, e.mention_index); };
  auto verb_key = [](const VerbEdit& e) { return std::make_tuple(1, e.token, 0); };

  for (const MentionEdit& e : predicted.mention_edits) {
    SlotWords& s = slots[mention_key(e)];
    s.original = split_ws(e.old_text);
    s.predicted = split_ws(e.new_text);
    s.has_predicted = true;
  }
  for (const VerbEdit& e : predicted.verb_edits) {
    SlotWords& s = slots[verb_key(e)];
    s.original = split_ws(e.old_text);
    s.predicted = split_ws(e.new_text);
    s.has_predicted = true;
  }
  for (const MentionEdit& e : gold.mention_edits) {
    SlotWords& s = slots[mention_key(e)];
    if (s.original.empty()) s.original = split_ws(e.old_text);
    s.gold = split_ws(e.new_text);
    s.has_gold = true;
  }
  for (const VerbEdit& e : gold.verb_edits) {
    SlotWords& s = slots[verb_key(e)];
    if (s.original.empty()) s.original = split_ws(e.old_text);
    s.gold = split_ws(e.new_text);
    s.has_gold = true;
  }

  long n_changed = 0, n_correct = 0, n_gold = 0;
  for (auto& [key, s] : slots) {
    if (!s.has_predicted) s.predicted = s.original;
    if (!s.has_gold) s.gold = s.original;
    size_t len = std::max({s.original.size(), s.predicted.size(), s.gold.size()});
    for (size_t i = 0; i < len; ++i) {
      const std::string& o = word_at(s.original, i);
      const std::string& p = word_at(s.predicted, i);
      const std::string& g = word_at(s.gold, i);
      bool predicted_changed = p != o;
      bool gold_changed = g != o;
      if (predicted_changed) ++n_changed;
      if (gold_changed) ++n_gold;
      if (predicted_changed && p == g) ++n_correct;
    }
  }

  ScoreReport r = report_from_counts(n_changed, n_correct, n_gold);
  DocumentScore d;
  d.doc_id = predicted.doc_id;
  d.precision = r.precision;
  d.recall = r.recall;
  d.f1 = r.f1;
  d.n_changed = r.n_changed;
  d.n_correct = r.n_correct;
  d.n_gold = r.n_gold;
  r.per_document.push_back(d);
  return r;
}

ScoreReport aggregate_reports(const std::vector<ScoreReport>& reports) {
  long n_changed = 0, n_correct = 0, n_gold = 0;
  std::vector<DocumentScore> rows;
  for (const ScoreReport& r : reports) {
    n_changed += r.n_changed;
    n_correct += r.n_correct;
    n_gold += r.n_gold;
    rows.insert(rows.end(), r.per_document.begin(), r.per_document.end());
  }
  ScoreReport out = report_from_counts(n_changed, n_correct, n_gold);
  out.per_document = std::move(rows);
  return out;
}

double mention_selection_accuracy(const ConversionResult& predicted,
                                  const ConversionResult& gold) {
  std::map<std::pair<int, int>, const MentionEdit*> by_slot;
  for (const MentionEdit& e : predicted.mention_edits)
    by_slot[{e.chain_id, e.mention_index}] = &e;

  long total = 0, correct = 0;
  for (const MentionEdit& g : gold.mention_edits) {
    if (g.new_text == g.old_text) continue;
    ++total;
    auto it = by_slot.find({g.chain_id, g.mention_index});
    const std::string& predicted_text = it != by_slot.end() ? it->second->new_text : g.old_text;
    if (predicted_text == g.new_text) ++correct;
  }
  return total > 0 ? static_cast<double>(correct) / total : 1.0;
}

ComponentScores component_scores(const LoadedDocument& loaded, const PreparedConversion& prepared,
                                 const PipelineConfig& cfg) {
  ComponentScores out;

  if (loaded.gold.replacements.empty()) {
    out.notices.push_back("chain identification: no gold replacement chains; stage skipped");
  } else {
    std::set<int> predicted{prepared.focus_chain};
    for (int id : prepared.confounders.singular) predicted.insert(id);
    for (int id : prepared.confounders.plural_deictic) predicted.insert(id);
    std::set<int> gold;
    for (const auto& [id, strings] : loaded.gold.replacements) gold.insert(id);
    out.chain_identification = count_overlap(predicted, gold);
  }

  if (loaded.gold.verb_changes.empty()) {
    out.notices.push_back("verb identification: no gold verb changes; stage skipped");
  } else {
    std::set<int> predicted;
    for (const VerbEdit& e : prepared.verb_edits) predicted.insert(e.token);
    std::set<int> gold;
    for (const auto& [token, form] : loaded.gold.verb_changes) gold.insert(token);
    out.verb_identification = count_overlap(predicted, gold);

    long total = 0, correct = 0;
    for (const auto& [token, form] : loaded.gold.verb_changes) {
      if (token < 0 || token >= static_cast<int>(loaded.doc.tokens.size())) continue;
      const Token& t = loaded.doc.tokens[token];
      ConjugationResult c =
          conjugate_third_singular(t.surface, t.lemma, tense_from_pos(t.pos), cfg.verbs);
      ++total;
      if (c.form == form) ++correct;
    }
    out.verb_conjugation = report_from_counts(total, correct, total);
  }

  if (loaded.gold.candidates.empty()) {
    out.notices.push_back("candidate sets: no gold candidate strings; stage skipped");
  } else {
    long n_predicted = 0, n_correct = 0, n_gold = 0;
    for (const auto& [chain_id, gold_strings] : loaded.gold.candidates) {
      std::set<std::string> gold(gold_strings.begin(), gold_strings.end());
      std::set<std::string> predicted;
      auto it = prepared.plan.candidates.find(chain_id);
      if (it != prepared.plan.candidates.end())
        for (const Candidate& c : it->second) predicted.insert(c.text);
      n_predicted += static_cast<long>(predicted.size());
      n_gold += static_cast<long>(gold.size());
      for (const std::string& s : predicted)
        if (gold.count(s)) ++n_correct;
    }
    out.candidate_sets = report_from_counts(n_predicted, n_correct, n_gold);
  }

  return out;
}

std::string score_report_csv(const std::string& label, const ScoreReport& report) {
  return format_row(label, report);
}

std::string component_scores_csv(const ComponentScores& scores) {
  std::string out = "component,precision,recall,f1,n_predicted,n_correct,n_gold\n";
  if (scores.chain_identification)
    out += format_row("chain_identification", *scores.chain_identification);
  if (scores.verb_identification)
    out += format_row("verb_identification", *scores.verb_identification);
  if (scores.verb_conjugation) out += format_row("verb_conjugation", *scores.verb_conjugation);
  if (scores.candidate_sets) out += format_row("candidate_sets", *scores.candidate_sets);
  return out;
}

}  // namespace povshift
