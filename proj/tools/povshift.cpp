#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "povshift/ablate.hpp"
#include "povshift/baselines.hpp"
#include "povshift/conll.hpp"
#include "povshift/container.hpp"
#include "povshift/human_eval.hpp"
#include "povshift/metrics.hpp"
#include "povshift/select.hpp"
#include "povshift/synth.hpp"
#include "povshift/trees.hpp"

#ifndef POVSHIFT_DEFAULT_DATA_DIR
#define POVSHIFT_DEFAULT_DATA_DIR "data"
#endif

namespace {

using namespace povshift;
using nlohmann::json;

// Thrown for bad usage or unreadable input; main maps it to exit code 2.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config files: one `key=value` per line, `#` comments, blank lines ignored.
// Flags given on the command line override file values.

std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& name) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (const std::string& raw : split_char(text, '\n')) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(name + " line " + std::to_string(line_no) + ": expected key=value, got '" +
                       line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError(name + " line " + std::to_string(line_no) + ": empty key");
    out[key] = value;
  }
  return out;
}

double parse_double_value(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config: bad numeric value '" + value + "' for " + key);
  }
}

long parse_int_value(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config: bad integer value '" + value + "' for " + key);
  }
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw UsageError("config: bad boolean value '" + value + "' for " + key);
}

// Applies recognized keys to the two model configs; unknown keys are errors.
void apply_config_map(const std::map<std::string, std::string>& kv, ModelConfig* mc,
                      TreeConfig* tc, int* embedding_dim) {
  for (const auto& [key, value] : kv) {
    if (key == "n_tokens") mc->n_tokens = (int)parse_int_value(key, value);
    else if (key == "k_mentions") mc->k_mentions = (int)parse_int_value(key, value);
    else if (key == "lstm_hidden") mc->lstm_hidden = (int)parse_int_value(key, value);
    else if (key == "mlp_hidden") mc->mlp_hidden = (int)parse_int_value(key, value);
    else if (key == "embedding_dim") *embedding_dim = (int)parse_int_value(key, value);
    else if (key == "margin") mc->margin = parse_double_value(key, value);
    else if (key == "learning_rate") mc->learning_rate = parse_double_value(key, value);
    else if (key == "dropout") mc->dropout = parse_double_value(key, value);
    else if (key == "max_epochs") mc->max_epochs = (int)parse_int_value(key, value);
    else if (key == "patience") mc->patience = (int)parse_int_value(key, value);
    else if (key == "seed") {
      mc->seed = (uint64_t)parse_int_value(key, value);
      tc->seed = mc->seed;
    } else if (key == "use_token_lstm") mc->use_token_lstm = parse_bool_value(key, value);
    else if (key == "use_mention_lstm") mc->use_mention_lstm = parse_bool_value(key, value);
    else if (key == "use_phi_t") mc->use_phi_t = parse_bool_value(key, value);
    else if (key == "use_phi_b") mc->use_phi_b = parse_bool_value(key, value);
    else if (key == "max_depth") tc->max_depth = (int)parse_int_value(key, value);
    else if (key == "min_leaf_size") tc->min_leaf_size = (int)parse_int_value(key, value);
    else if (key == "n_trees") tc->n_trees = (int)parse_int_value(key, value);
    else if (key == "tree_learning_rate") tc->learning_rate = parse_double_value(key, value);
    else throw UsageError("config: unknown key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Embedding provider. POVSHIFT_CACHE names a directory for the token cache;
// the cache is skipped for multi-threaded training, which shares the provider
// across workers.

std::unique_ptr<EmbeddingProvider> make_provider(int dimension, bool allow_cache) {
  const char* cache = std::getenv("POVSHIFT_CACHE");
  if (allow_cache && cache != nullptr && *cache != '\0')
    return std::make_unique<CachingProvider>(std::make_shared<HashEmbeddingProvider>(dimension),
                                             cache);
  return std::make_unique<HashEmbeddingProvider>(dimension);
}

// Embedding dimension recorded in a model's provider version ("hash-v1-dN").
int dimension_from_provider_version(const std::string& version, int fallback) {
  auto pos = version.rfind("-d");
  if (pos == std::string::npos) return fallback;
  try {
    return std::stoi(version.substr(pos + 2));
  } catch (const std::exception&) {
    return fallback;
  }
}

// ---------------------------------------------------------------------------
// Pipeline resources.

struct PipelineFlags {
  std::string data_dir = POVSHIFT_DEFAULT_DATA_DIR;
  std::string verb_dict;
  std::string dep_rules;
  std::string relational;
  std::string performatives;
  std::string from_pov = "first";
  std::string focus_gender;
  std::string focus_name;
  std::string given_name;
  std::string family_name;
  int n_tokens = 50;
  int k_mentions = 10;
};

void add_pipeline_options(CLI::App* cmd, PipelineFlags* pf, bool require_gender) {
  cmd->add_option("--data-dir", pf->data_dir, "directory with lexicon data files")
      ->capture_default_str();
  cmd->add_option("--verb-dict", pf->verb_dict, "verb conjugation TSV (default <data-dir>/verb_conjugations.tsv)");
  cmd->add_option("--dep-rules", pf->dep_rules, "dependency label groups (default <data-dir>/dependency_rules.txt)");
  cmd->add_option("--relational-nouns", pf->relational, "relational noun TSV (default <data-dir>/relational_nouns.tsv)");
  cmd->add_option("--performative-verbs", pf->performatives, "performative verb list (default <data-dir>/performative_verbs.txt)");
  cmd->add_option("--from-pov", pf->from_pov, "narration person to convert from: first or second")
      ->capture_default_str();
  auto* gender = cmd->add_option("--focus-gender", pf->focus_gender,
                                 "focus entity gender: feminine or masculine");
  if (require_gender) gender->required();
  cmd->add_option("--focus-name", pf->focus_name, "focus entity full name");
  cmd->add_option("--given-name", pf->given_name, "focus entity given name override");
  cmd->add_option("--family-name", pf->family_name, "focus entity family name override");
  cmd->add_option("--n-tokens", pf->n_tokens, "token window width per side")->capture_default_str();
  cmd->add_option("--k-mentions", pf->k_mentions, "mention groups per side")->capture_default_str();
}

std::string data_file(const PipelineFlags& pf, const std::string& override_path,
                      const std::string& name) {
  if (!override_path.empty()) return override_path;
  return (std::filesystem::path(pf.data_dir) / name).string();
}

PipelineConfig build_pipeline_config(const PipelineFlags& pf) {
  PipelineConfig cfg;
  if (pf.from_pov == "first") cfg.spec.from_pov = Person::first;
  else if (pf.from_pov == "second") cfg.spec.from_pov = Person::second;
  else throw UsageError("--from-pov must be 'first' or 'second', got '" + pf.from_pov + "'");

  if (pf.focus_gender == "feminine") cfg.spec.gender = Gender::feminine;
  else if (pf.focus_gender == "masculine") cfg.spec.gender = Gender::masculine;
  else if (!pf.focus_gender.empty())
    throw UsageError("--focus-gender must be 'feminine' or 'masculine', got '" + pf.focus_gender +
                     "'");

  cfg.spec.full_name = pf.focus_name;
  if (!pf.focus_name.empty()) {
    auto parts = split_ws(pf.focus_name);
    if (!parts.empty()) cfg.spec.given_name = parts.front();
    if (parts.size() > 1) cfg.spec.family_name = parts.back();
  }
  if (!pf.given_name.empty()) cfg.spec.given_name = pf.given_name;
  if (!pf.family_name.empty()) cfg.spec.family_name = pf.family_name;

  std::string verb_path = data_file(pf, pf.verb_dict, "verb_conjugations.tsv");
  if (std::filesystem::exists(verb_path)) cfg.verbs = VerbDictionary::load(verb_path);
  std::string rules_path = data_file(pf, pf.dep_rules, "dependency_rules.txt");
  if (std::filesystem::exists(rules_path)) cfg.rules = DependencyRules::load(rules_path);
  std::string rel_path = data_file(pf, pf.relational, "relational_nouns.tsv");
  if (std::filesystem::exists(rel_path)) cfg.relational = RelationalLexicon::load(rel_path);
  std::string perf_path = data_file(pf, pf.performatives, "performative_verbs.txt");
  if (std::filesystem::exists(perf_path)) cfg.performatives = PerformativeLexicon::load(perf_path);

  cfg.windows.n_tokens = pf.n_tokens;
  cfg.windows.k_mentions = pf.k_mentions;
  return cfg;
}

// ---------------------------------------------------------------------------
// Gold annotation files: a JSON object with the same gold_* keys a benchmark
// document may embed.

void merge_gold_annotations(LoadedDocument* loaded, const std::string& path) {
  json root = json::parse(read_file(path), nullptr, false);
  if (root.is_discarded() || !root.is_object())
    throw UsageError(path + ": not a JSON object");
  auto chain_of = [&](int chain_id, const std::string& where) -> const CorefChain* {
    const CorefChain* chain = loaded->doc.chain_by_id(chain_id);
    if (!chain)
      throw UsageError(path + ": " + where + " names unknown chain id " +
                       std::to_string(chain_id));
    return chain;
  };
  if (root.contains("gold_replacements")) {
    for (const json& jr : root["gold_replacements"]) {
      int chain_id = jr.at("chain").get<int>();
      int mention = jr.at("mention").get<int>();
      const CorefChain* chain = chain_of(chain_id, "gold_replacements");
      if (mention < 0 || mention >= (int)chain->mentions.size())
        throw UsageError(path + ": gold_replacements mention index " + std::to_string(mention) +
                         " out of range for chain " + std::to_string(chain_id));
      auto& slot = loaded->gold.replacements[chain_id];
      if (slot.empty())
        for (const Mention& m : chain->mentions) slot.push_back(m.text);
      slot[mention] = jr.at("string").get<std::string>();
    }
  }
  if (root.contains("gold_verb_changes")) {
    for (const json& jr : root["gold_verb_changes"]) {
      int token = jr.at("token").get<int>();
      if (token < 0 || token >= (int)loaded->doc.tokens.size())
        throw UsageError(path + ": gold_verb_changes token index " + std::to_string(token) +
                         " out of range");
      loaded->gold.verb_changes[token] = jr.at("string").get<std::string>();
    }
  }
  if (root.contains("gold_candidates")) {
    for (const json& jr : root["gold_candidates"]) {
      int chain_id = jr.at("chain").get<int>();
      chain_of(chain_id, "gold_candidates");
      auto& strings = loaded->gold.candidates[chain_id];
      strings.clear();
      for (const json& s : jr.at("strings")) strings.push_back(s.get<std::string>());
    }
  }
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_file(path, content);
}

// ---------------------------------------------------------------------------
// extract-data

struct ExtractArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::string stats_path;
  std::string dataset = "corpus";
  int n_tokens = 50;
  int k_mentions = 10;
  bool keep_deictic = false;
};

int run_extract(const ExtractArgs& args) {
  std::vector<Document> docs;
  for (const std::string& path : args.inputs)
    for (ConllDocument& cd : load_conll_file(path)) docs.push_back(std::move(cd.doc));
  std::vector<Document> usable = args.keep_deictic ? docs : filter_deictic_documents(docs);

  std::vector<RankingExample> examples;
  WindowConfig wc{args.n_tokens, args.k_mentions};
  for (const Document& doc : usable) {
    auto ex = extract_document_examples(doc, wc);
    examples.insert(examples.end(), ex.begin(), ex.end());
  }
  write_examples_jsonl(args.output, examples);

  if (!args.stats_path.empty()) {
    std::string csv = stats_csv_header();
    csv += stats_csv_row(args.dataset, corpus_stats(usable));
    write_file(args.stats_path, csv);
  }

  if (usable.empty()) {
    std::cerr << "warning: no documents survived deictic filtering; wrote empty " << args.output
              << "\n";
    return 0;
  }
  std::cout << "documents=" << usable.size() << " examples=" << examples.size() << " output="
            << args.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::vector<std::string> inputs;
  std::string dataset = "corpus";
  std::string output;
  bool raw = false;
};

int run_stats(const StatsArgs& args) {
  std::vector<Document> docs;
  for (const std::string& path : args.inputs)
    for (ConllDocument& cd : load_conll_file(path)) docs.push_back(std::move(cd.doc));
  std::string csv = stats_csv_header();
  if (args.raw) {
    csv += stats_csv_row(args.dataset, corpus_stats(docs));
  } else {
    std::vector<Document> usable = filter_deictic_documents(docs);
    csv += stats_csv_row(args.dataset, corpus_stats(usable));
  }
  write_or_print(args.output, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string examples_path;
  std::string dev_path;
  std::string model_path;
  std::string kind = "ranker";
  std::string config_path;
  int embedding_dim = 32;
  int jobs = 1;
  bool grid = false;
  std::string grid_report;
  ModelConfig mc;
  TreeConfig tc;
};

int run_train(const TrainArgs& args) {
  std::vector<RankingExample> train = load_examples_jsonl(args.examples_path);
  if (train.empty()) throw UsageError("no training examples in " + args.examples_path);
  std::vector<RankingExample> dev;
  if (!args.dev_path.empty()) dev = load_examples_jsonl(args.dev_path);

  bool threaded = args.grid && args.jobs > 1;
  auto provider = make_provider(args.embedding_dim, !threaded);

  if (args.kind == "ranker") {
    ModelConfig mc = args.mc;
    TrainedRanker model;
    TrainReport report;
    std::vector<GridResult> grid_results;
    if (args.grid) {
      model = grid_search_train(train, dev, mc, *provider, &grid_results, args.jobs);
    } else {
      model = train_ranker(train, dev, mc, *provider, &report);
    }
    model.metadata()["train_examples"] = std::to_string(train.size());
    model.metadata()["dev_examples"] = std::to_string(dev.size());
    model.save(args.model_path);
    if (args.grid && !args.grid_report.empty()) {
      std::string csv = "margin,learning_rate,dropout,accuracy\n";
      for (const GridResult& r : grid_results)
        csv += format_double(r.config.margin) + "," + format_double(r.config.learning_rate) +
               "," + format_double(r.config.dropout) + "," + format_double(r.dev_accuracy) + "\n";
      write_file(args.grid_report, csv);
    }
    double acc = model.selection_accuracy(dev.empty() ? train : dev, *provider, true);
    std::cout << "model=ranker examples=" << train.size() << " dev=" << dev.size();
    if (!args.grid)
      std::cout << " epochs=" << report.epochs_run << " best_epoch=" << report.best_epoch;
    std::cout << " accuracy=" << format_double(acc) << " saved=" << args.model_path << "\n";
    return 0;
  }

  auto variant = tree_variant_from_string(args.kind);
  if (!variant)
    throw UsageError("--kind must be ranker, tree, forest, or gbt; got '" + args.kind + "'");
  TreeConfig tc = args.tc;
  tc.variant = *variant;
  TreeRanker model = train_tree_ranker(train, tc, *provider);
  model.metadata()["train_examples"] = std::to_string(train.size());
  model.save(args.model_path);
  model.attach_provider(*provider);
  double acc = model.selection_accuracy(dev.empty() ? train : dev);
  std::cout << "model=" << args.kind << " examples=" << train.size() << " dev=" << dev.size()
            << " trees=" << model.trees().size() << " accuracy=" << format_double(acc)
            << " saved=" << args.model_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// convert

struct ConvertArgs {
  std::string input;
  std::string gold_path;
  std::string model_path;
  std::string baseline;
  std::string output;
  std::string text_out;
  PipelineFlags pipeline;
  uint64_t seed = 13;
  int embedding_dim = 32;
  bool force = false;
  bool emit_gold = false;
};

int run_convert(const ConvertArgs& args) {
  LoadedDocument loaded = load_document_json(args.input);
  if (!args.gold_path.empty()) merge_gold_annotations(&loaded, args.gold_path);

  if (args.emit_gold) {
    if (loaded.gold.replacements.empty() && loaded.gold.verb_changes.empty())
      throw UsageError("--emit-gold needs gold annotations, none found in the input");
    ConversionResult res = gold_conversion(loaded);
    write_or_print(args.output, conversion_to_json(res));
    if (!args.text_out.empty()) write_file(args.text_out, res.text + "\n");
    return 0;
  }

  if (args.model_path.empty() && args.baseline.empty())
    throw UsageError("convert needs --model or --baseline");
  if (!args.model_path.empty() && !args.baseline.empty())
    throw UsageError("convert takes --model or --baseline, not both");

  PipelineConfig cfg = build_pipeline_config(args.pipeline);
  PreparedConversion prepared = prepare_conversion(loaded, cfg);

  std::unique_ptr<EmbeddingProvider> provider;
  std::unique_ptr<MentionScorer> scorer;
  std::unique_ptr<TrainedRanker> ranker_model;
  std::unique_ptr<TreeRanker> tree_model;

  if (!args.model_path.empty()) {
    json header = unpack_model(read_file(args.model_path), nullptr);
    std::string type = header.value("type", "");
    std::string trained_with = header.value("provider_version", "");
    int dim = dimension_from_provider_version(trained_with, args.embedding_dim);
    provider = make_provider(dim, true);
    if (type == "ranker") {
      ranker_model = std::make_unique<TrainedRanker>(
          TrainedRanker::load(args.model_path, provider->version(), args.force));
      scorer = std::make_unique<RankerScorer>(*ranker_model, *provider);
    } else if (type == "tree") {
      tree_model = std::make_unique<TreeRanker>(
          TreeRanker::load(args.model_path, provider->version(), args.force));
      tree_model->attach_provider(*provider);
    } else {
      throw UsageError("model file contains a '" + type + "' model, expected 'ranker' or 'tree'");
    }
  } else if (args.baseline == "random") {
    scorer = std::make_unique<RandomScorer>(args.seed);
  } else if (args.baseline == "pronouns") {
    scorer = std::make_unique<OnlyPronounsScorer>(chain_attributes(prepared));
  } else if (args.baseline == "most-common") {
    scorer = std::make_unique<MostCommonScorer>(gold_strings_by_chain(prepared));
  } else {
    throw UsageError("--baseline must be random, pronouns, or most-common; got '" +
                     args.baseline + "'");
  }

  MentionScorer& active = scorer ? *scorer : static_cast<MentionScorer&>(*tree_model);
  ConversionResult res = select_mentions(prepared, active);
  for (const std::string& w : prepared.warnings) std::cerr << "warning: " << w << "\n";
  write_or_print(args.output, conversion_to_json(res));
  if (!args.text_out.empty()) write_file(args.text_out, res.text + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::vector<std::string> predicted;
  std::vector<std::string> gold;
  std::string output;
  std::string components_doc;
  std::string gold_annotations;
  PipelineFlags pipeline;
  double min_f1 = -1.0;
};

int run_evaluate(const EvaluateArgs& args) {
  if (args.predicted.size() != args.gold.size())
    throw UsageError("evaluate needs one --gold per --predicted (" +
                     std::to_string(args.predicted.size()) + " vs " +
                     std::to_string(args.gold.size()) + ")");
  if (args.predicted.empty()) throw UsageError("evaluate needs at least one --predicted/--gold pair");

  std::vector<ScoreReport> reports;
  double accuracy_sum = 0.0;
  std::string csv = "metric,precision,recall,f1,n_changed,n_correct,n_gold\n";
  for (size_t i = 0; i < args.predicted.size(); ++i) {
    ConversionResult pred = parse_conversion_json(read_file(args.predicted[i]));
    ConversionResult gold = parse_conversion_json(read_file(args.gold[i]));
    ScoreReport r = score_conversion(pred, gold);
    accuracy_sum += mention_selection_accuracy(pred, gold);
    csv += score_report_csv("doc:" + pred.doc_id, r);
    reports.push_back(std::move(r));
  }
  ScoreReport overall = aggregate_reports(reports);
  csv += score_report_csv("overall", overall);
  double mean_accuracy = accuracy_sum / (double)args.predicted.size();
  csv += "mention_accuracy," + format_double(mean_accuracy) + ",,,,,\n";

  if (!args.components_doc.empty()) {
    LoadedDocument loaded = load_document_json(args.components_doc);
    if (!args.gold_annotations.empty()) merge_gold_annotations(&loaded, args.gold_annotations);
    PipelineConfig cfg = build_pipeline_config(args.pipeline);
    PreparedConversion prepared = prepare_conversion(loaded, cfg);
    ComponentScores comps = component_scores(loaded, prepared, cfg);
    for (const std::string& n : comps.notices) std::cerr << "notice: " << n << "\n";
    csv += component_scores_csv(comps);
  }

  write_or_print(args.output, csv);
  if (args.min_f1 >= 0.0 && overall.f1 < args.min_f1) {
    std::cerr << "quality gate failed: overall F1 " << format_double(overall.f1) << " < "
              << format_double(args.min_f1) << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// score-human-eval

struct HumanEvalArgs {
  std::string ratings_path;
  std::string summary_path;
  std::string scatter_path;
};

int run_human_eval(const HumanEvalArgs& args) {
  HumanEvalReport report = score_human_eval(load_ratings_csv(args.ratings_path));
  write_or_print(args.summary_path, human_eval_summary_csv(report));
  if (!args.scatter_path.empty()) write_file(args.scatter_path, human_eval_scatter_csv(report));
  return 0;
}

// ---------------------------------------------------------------------------
// ablate

struct AblateArgs {
  std::string train_path;
  std::string eval_path;
  std::string config_path;
  std::string rows_path;
  std::string comparisons_path;
  int embedding_dim = 32;
  int jobs = 1;
  ModelConfig mc;
};

int run_ablate(const AblateArgs& args) {
  std::vector<RankingExample> train = load_examples_jsonl(args.train_path);
  if (train.empty()) throw UsageError("no training examples in " + args.train_path);
  std::vector<RankingExample> eval_set = load_examples_jsonl(args.eval_path);
  if (eval_set.empty()) throw UsageError("no evaluation examples in " + args.eval_path);

  auto provider = make_provider(args.embedding_dim, args.jobs <= 1);
  AblationReport report = run_ablations(train, eval_set, args.mc, *provider, args.jobs);
  write_or_print(args.rows_path, ablation_rows_csv(report));
  if (!args.comparisons_path.empty())
    write_file(args.comparisons_path, ablation_comparisons_csv(report));
  else if (args.rows_path.empty())
    std::cout << "\n" << ablation_comparisons_csv(report);
  return 0;
}

// ---------------------------------------------------------------------------
// synth (corpus generator for smoke tests and benchmarks)

struct SynthArgs {
  std::string output_dir;
  SynthConfig config;
};

int run_synth(const SynthArgs& args) {
  std::filesystem::create_directories(args.output_dir);
  std::vector<Document> docs = generate_corpus(args.config);
  for (const Document& doc : docs) {
    LoadedDocument loaded;
    loaded.doc = doc;
    write_file((std::filesystem::path(args.output_dir) / (doc.doc_id + ".json")).string(),
               document_to_json(loaded));
  }
  std::cout << "documents=" << docs.size() << " output=" << args.output_dir << "\n";
  return 0;
}

void add_model_options(CLI::App* cmd, TrainArgs* args) {
  cmd->add_option("--embedding-dim", args->embedding_dim, "token embedding width")
      ->capture_default_str();
  cmd->add_option("--n-tokens", args->mc.n_tokens, "token window width per side")
      ->capture_default_str();
  cmd->add_option("--k-mentions", args->mc.k_mentions, "mention groups per side")
      ->capture_default_str();
  cmd->add_option("--hidden", args->mc.lstm_hidden, "LSTM hidden width")->capture_default_str();
  cmd->add_option("--mlp-hidden", args->mc.mlp_hidden, "scoring layer width")
      ->capture_default_str();
  cmd->add_option("--margin", args->mc.margin, "ranking loss margin")->capture_default_str();
  cmd->add_option("--learning-rate", args->mc.learning_rate, "optimizer step size")
      ->capture_default_str();
  cmd->add_option("--dropout", args->mc.dropout, "feature dropout probability")
      ->capture_default_str();
  cmd->add_option("--max-epochs", args->mc.max_epochs, "training epoch cap")
      ->capture_default_str();
  cmd->add_option("--patience", args->mc.patience, "early stopping patience")
      ->capture_default_str();
  cmd->add_flag("--no-token-lstm", "disable the token context encoder");
  cmd->add_flag("--no-mention-lstm", "disable the mention context encoder");
  cmd->add_flag("--no-phi-t", "disable per-token mention features");
  cmd->add_flag("--no-phi-b", "disable per-candidate features");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"narrative point-of-view conversion toolkit"};
  app.require_subcommand(1);

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract-data",
                                     "extract mention selection examples from coreference files");
  extract->add_option("inputs", extract_args.inputs, "coreference column files")
      ->required()
      ->expected(-1);
  extract->add_option("--output", extract_args.output, "examples JSONL path")->required();
  extract->add_option("--stats", extract_args.stats_path, "corpus statistics CSV path");
  extract->add_option("--dataset", extract_args.dataset, "dataset label for the statistics row")
      ->capture_default_str();
  extract->add_option("--n-tokens", extract_args.n_tokens, "token window width per side")
      ->capture_default_str();
  extract->add_option("--k-mentions", extract_args.k_mentions, "mention groups per side")
      ->capture_default_str();
  extract->add_flag("--keep-deictic", extract_args.keep_deictic,
                    "skip the out-of-quote deictic pronoun filter");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "corpus statistics over coreference files");
  stats->add_option("inputs", stats_args.inputs, "coreference column files")
      ->required()
      ->expected(-1);
  stats->add_option("--dataset", stats_args.dataset, "dataset label")->capture_default_str();
  stats->add_option("--output", stats_args.output, "CSV path (stdout when omitted)");
  stats->add_flag("--raw", stats_args.raw, "count all documents, skipping the deictic filter");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train a mention selection model");
  train->add_option("--examples", train_args.examples_path, "training examples JSONL")->required();
  train->add_option("--dev", train_args.dev_path, "held-out examples JSONL for early stopping");
  train->add_option("--model", train_args.model_path, "output model path")->required();
  train->add_option("--kind", train_args.kind, "ranker, tree, forest, or gbt")
      ->capture_default_str();
  train->add_option("--config", train_args.config_path, "key=value config file");
  std::string train_seed_value;
  auto* train_seed = train->add_option("--seed", train_seed_value, "training seed");
  train->add_option("--jobs", train_args.jobs, "concurrent grid workers")->capture_default_str();
  train->add_flag("--grid", train_args.grid, "search the margin/learning-rate/dropout grid");
  train->add_option("--grid-report", train_args.grid_report, "grid accuracy CSV path");
  add_model_options(train, &train_args);
  train->add_option("--max-depth", train_args.tc.max_depth, "tree depth cap")
      ->capture_default_str();
  train->add_option("--min-leaf", train_args.tc.min_leaf_size, "minimum instances per leaf")
      ->capture_default_str();
  train->add_option("--n-trees", train_args.tc.n_trees, "ensemble size")->capture_default_str();
  train->add_option("--tree-learning-rate", train_args.tc.learning_rate, "boosting shrinkage")
      ->capture_default_str();

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert", "convert a document to third-person narration");
  convert->add_option("--input", convert_args.input, "benchmark document JSON")->required();
  convert->add_option("--gold-annotations", convert_args.gold_path,
                      "gold annotation JSON merged into the document");
  convert->add_option("--model", convert_args.model_path, "trained model path");
  convert->add_option("--baseline", convert_args.baseline,
                      "selection baseline: random, pronouns, or most-common");
  convert->add_option("--output", convert_args.output, "conversion JSON path (stdout when omitted)");
  convert->add_option("--text-out", convert_args.text_out, "converted text path");
  convert->add_option("--seed", convert_args.seed, "random baseline seed")->capture_default_str();
  convert->add_option("--embedding-dim", convert_args.embedding_dim,
                      "embedding width when the model does not record one")
      ->capture_default_str();
  convert->add_flag("--force", convert_args.force, "load models trained with another provider");
  convert->add_flag("--emit-gold", convert_args.emit_gold,
                    "write the conversion implied by the gold annotations");
  add_pipeline_options(convert, &convert_args.pipeline, true);

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "score conversions against gold conversions");
  evaluate->add_option("--predicted", eval_args.predicted, "predicted conversion JSON files")
      ->required();
  evaluate->add_option("--gold", eval_args.gold, "gold conversion JSON files")->required();
  evaluate->add_option("--output", eval_args.output, "report CSV path (stdout when omitted)");
  evaluate->add_option("--min-f1", eval_args.min_f1, "fail with exit code 1 below this overall F1");
  evaluate->add_option("--components-doc", eval_args.components_doc,
                       "benchmark document for per-stage scores");
  evaluate->add_option("--gold-annotations", eval_args.gold_annotations,
                       "gold annotation JSON for per-stage scores");
  add_pipeline_options(evaluate, &eval_args.pipeline, false);

  HumanEvalArgs human_args;
  auto* human = app.add_subcommand("score-human-eval", "aggregate human rating CSVs");
  human->add_option("--ratings", human_args.ratings_path, "ratings CSV")->required();
  human->add_option("--summary", human_args.summary_path, "summary CSV path (stdout when omitted)");
  human->add_option("--scatter", human_args.scatter_path, "per-sentence CSV path");

  AblateArgs ablate_args;
  auto* ablate = app.add_subcommand("ablate", "train and compare encoder/feature combinations");
  ablate->add_option("--train", ablate_args.train_path, "training examples JSONL")->required();
  ablate->add_option("--eval", ablate_args.eval_path, "evaluation examples JSONL")->required();
  ablate->add_option("--config", ablate_args.config_path, "key=value config file");
  ablate->add_option("--rows", ablate_args.rows_path, "accuracy CSV path (stdout when omitted)");
  ablate->add_option("--comparisons", ablate_args.comparisons_path, "pairwise t-test CSV path");
  ablate->add_option("--embedding-dim", ablate_args.embedding_dim, "token embedding width")
      ->capture_default_str();
  ablate->add_option("--jobs", ablate_args.jobs, "concurrent variant workers")
      ->capture_default_str();
  std::string ablate_seed_value;
  auto* ablate_seed = ablate->add_option("--seed", ablate_seed_value, "training seed");
  ablate->add_option("--n-tokens", ablate_args.mc.n_tokens, "token window width per side")
      ->capture_default_str();
  ablate->add_option("--k-mentions", ablate_args.mc.k_mentions, "mention groups per side")
      ->capture_default_str();
  ablate->add_option("--hidden", ablate_args.mc.lstm_hidden, "LSTM hidden width")
      ->capture_default_str();
  ablate->add_option("--mlp-hidden", ablate_args.mc.mlp_hidden, "scoring layer width")
      ->capture_default_str();
  ablate->add_option("--margin", ablate_args.mc.margin, "ranking loss margin")
      ->capture_default_str();
  ablate->add_option("--learning-rate", ablate_args.mc.learning_rate, "optimizer step size")
      ->capture_default_str();
  ablate->add_option("--max-epochs", ablate_args.mc.max_epochs, "training epoch cap")
      ->capture_default_str();
  ablate->add_option("--patience", ablate_args.mc.patience, "early stopping patience")
      ->capture_default_str();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark corpus");
  synth->add_option("--output-dir", synth_args.output_dir, "directory for document JSON files")
      ->required();
  synth->add_option("--docs", synth_args.config.n_docs, "number of documents")
      ->capture_default_str();
  synth->add_option("--seed", synth_args.config.seed, "corpus seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*extract) return run_extract(extract_args);
    if (*stats) return run_stats(stats_args);
    if (*train) {
      // Config file first, then flags on top.
      ModelConfig mc_flags = train_args.mc;
      TreeConfig tc_flags = train_args.tc;
      int dim_flag = train_args.embedding_dim;
      if (!train_args.config_path.empty()) {
        auto kv = parse_key_values(read_file(train_args.config_path), train_args.config_path);
        ModelConfig mc;
        TreeConfig tc;
        int dim = 32;
        apply_config_map(kv, &mc, &tc, &dim);
        // Flags that were actually passed override the file.
        if (!train->count("--n-tokens")) mc_flags.n_tokens = mc.n_tokens;
        if (!train->count("--k-mentions")) mc_flags.k_mentions = mc.k_mentions;
        if (!train->count("--hidden")) mc_flags.lstm_hidden = mc.lstm_hidden;
        if (!train->count("--mlp-hidden")) mc_flags.mlp_hidden = mc.mlp_hidden;
        if (!train->count("--margin")) mc_flags.margin = mc.margin;
        if (!train->count("--learning-rate")) mc_flags.learning_rate = mc.learning_rate;
        if (!train->count("--dropout")) mc_flags.dropout = mc.dropout;
        if (!train->count("--max-epochs")) mc_flags.max_epochs = mc.max_epochs;
        if (!train->count("--patience")) mc_flags.patience = mc.patience;
        if (!train_seed->count()) mc_flags.seed = mc.seed;
        mc_flags.use_token_lstm = mc.use_token_lstm;
        mc_flags.use_mention_lstm = mc.use_mention_lstm;
        mc_flags.use_phi_t = mc.use_phi_t;
        mc_flags.use_phi_b = mc.use_phi_b;
        if (!train->count("--max-depth")) tc_flags.max_depth = tc.max_depth;
        if (!train->count("--min-leaf")) tc_flags.min_leaf_size = tc.min_leaf_size;
        if (!train->count("--n-trees")) tc_flags.n_trees = tc.n_trees;
        if (!train->count("--tree-learning-rate")) tc_flags.learning_rate = tc.learning_rate;
        if (!train->count("--embedding-dim")) dim_flag = dim;
      }
      if (train_seed->count()) {
        uint64_t seed = (uint64_t)parse_int_value("seed", train_seed_value);
        mc_flags.seed = seed;
        tc_flags.seed = seed;
      } else if (train_args.config_path.empty()) {
        tc_flags.seed = mc_flags.seed;
      }
      if (train->count("--no-token-lstm")) mc_flags.use_token_lstm = false;
      if (train->count("--no-mention-lstm")) mc_flags.use_mention_lstm = false;
      if (train->count("--no-phi-t")) mc_flags.use_phi_t = false;
      if (train->count("--no-phi-b")) mc_flags.use_phi_b = false;
      TrainArgs resolved = train_args;
      resolved.mc = mc_flags;
      resolved.tc = tc_flags;
      resolved.embedding_dim = dim_flag;
      return run_train(resolved);
    }
    if (*convert) return run_convert(convert_args);
    if (*evaluate) return run_evaluate(eval_args);
    if (*human) return run_human_eval(human_args);
    if (*ablate) {
      if (!ablate_args.config_path.empty()) {
        auto kv = parse_key_values(read_file(ablate_args.config_path), ablate_args.config_path);
        ModelConfig mc = ablate_args.mc;
        TreeConfig tc;
        int dim = ablate_args.embedding_dim;
        apply_config_map(kv, &mc, &tc, &dim);
        if (!ablate->count("--n-tokens")) ablate_args.mc.n_tokens = mc.n_tokens;
        if (!ablate->count("--k-mentions")) ablate_args.mc.k_mentions = mc.k_mentions;
        if (!ablate->count("--hidden")) ablate_args.mc.lstm_hidden = mc.lstm_hidden;
        if (!ablate->count("--mlp-hidden")) ablate_args.mc.mlp_hidden = mc.mlp_hidden;
        if (!ablate->count("--margin")) ablate_args.mc.margin = mc.margin;
        if (!ablate->count("--learning-rate")) ablate_args.mc.learning_rate = mc.learning_rate;
        if (!ablate->count("--max-epochs")) ablate_args.mc.max_epochs = mc.max_epochs;
        if (!ablate->count("--patience")) ablate_args.mc.patience = mc.patience;
        if (!ablate->count("--embedding-dim")) ablate_args.embedding_dim = dim;
        if (!ablate_seed->count()) ablate_args.mc.seed = mc.seed;
      }
      if (ablate_seed->count())
        ablate_args.mc.seed = (uint64_t)parse_int_value("seed", ablate_seed_value);
      return run_ablate(ablate_args);
    }
    if (*synth) return run_synth(synth_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
