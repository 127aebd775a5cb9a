#include "povshift/ablate.hpp"

#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

namespace povshift {

std::vector<AblationVariant> ablation_variants(const ModelConfig& base) {
  auto with = [&](bool token, bool mention, bool phi_t, bool phi_b) {
    ModelConfig c = base;
    c.use_token_lstm = token;
    c.use_mention_lstm = mention;
    c.use_phi_t = phi_t;
    c.use_phi_b = phi_b;
    return c;
  };
  return {
      {"token+mention", with(true, true, true, true)},
      {"token+mention-phib", with(true, true, true, false)},
      {"token+mention-phitb", with(true, true, false, true)},
      {"token", with(true, false, false, true)},
      {"mention", with(false, true, true, true)},
      {"token+phitb", with(true, false, true, true)},
  };
}

AblationReport run_ablations(const std::vector<RankingExample>& train,
                             const std::vector<RankingExample>& eval_set,
                             const ModelConfig& base, EmbeddingProvider& provider, int jobs) {
  if (!base.use_token_lstm && !base.use_mention_lstm)
    throw std::invalid_argument("ablations need at least one encoder enabled in the base config");

  std::vector<AblationVariant> variants = ablation_variants(base);

  std::map<std::string, std::vector<RankingExample>> by_doc;
  for (const RankingExample& e : eval_set) by_doc[e.doc_id].push_back(e);

  AblationReport report;
  report.rows.resize(variants.size());
  auto run_one = [&](size_t i) {
    TrainedRanker model = train_ranker(train, {}, variants[i].config, provider);
    AblationRow row;
    row.label = variants[i].label;
    row.config = variants[i].config;
    row.accuracy = model.selection_accuracy(eval_set, provider, true);
    for (const auto& [doc_id, examples] : by_doc) {
      row.doc_ids.push_back(doc_id);
      row.per_doc_accuracy.push_back(model.selection_accuracy(examples, provider, true));
    }
    report.rows[i] = std::move(row);
  };

  if (jobs <= 1) {
    for (size_t i = 0; i < variants.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (size_t i = w; i < variants.size(); i += jobs) run_one(i);
      });
    for (std::thread& t : workers) t.join();
  }

  for (size_t i = 0; i < report.rows.size(); ++i)
    for (size_t j = i + 1; j < report.rows.size(); ++j) {
      if (report.rows[i].per_doc_accuracy.size() < 2) continue;
      TTestResult r =
          paired_t_test(report.rows[i].per_doc_accuracy, report.rows[j].per_doc_accuracy);
      report.comparisons.push_back({report.rows[i].label, report.rows[j].label, r.t, r.p});
    }
  return report;
}

std::string ablation_rows_csv(const AblationReport& report) {
  std::string out = "variant,accuracy,documents\n";
  char buf[160];
  for (const AblationRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%zu\n", row.label.c_str(), row.accuracy,
                  row.doc_ids.size());
    out += buf;
  }
  return out;
}

std::string ablation_comparisons_csv(const AblationReport& report) {
  std::string out = "a,b,t,p\n";
  char buf[200];
  for (const AblationComparison& c : report.comparisons) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6g,%.6g\n", c.a.c_str(), c.b.c_str(), c.t, c.p);
    out += buf;
  }
  return out;
}

}  // namespace povshift
