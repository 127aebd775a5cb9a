#include "povshift/examples.hpp"

#include <set>

#include "json.hpp"

#include "povshift/conll.hpp"
#include "povshift/util.hpp"

namespace povshift {

using nlohmann::json;

namespace {

CandidateKind kind_from_string(const std::string& s) {
  if (s == "proper_np") return CandidateKind::proper_np;
  if (s == "pronoun") return CandidateKind::pronoun;
  return CandidateKind::common_np;
}

json candidate_to_json(const Candidate& c) {
  json j;
  j["s"] = c.text;
  j["kind"] = to_string(c.kind);
  json cases = json::array();
  for (CaseClass cc : c.cases) cases.push_back(to_string(cc));
  j["cases"] = cases;
  j["source"] = c.source;
  return j;
}

Candidate candidate_from_json(const json& j) {
  Candidate c;
  c.text = j.value("s", "");
  c.kind = kind_from_string(j.value("kind", "common_np"));
  if (j.contains("cases"))
    for (const auto& cc : j.at("cases"))
      if (auto parsed = case_class_from_string(cc.get<std::string>())) c.cases.push_back(*parsed);
  c.source = j.value("source", "");
  return c;
}

json mention_to_json(const ExampleMention& m) {
  json j;
  j["tokens"] = m.tokens;
  j["own"] = m.own;
  j["dist"] = m.dist;
  j["resolved"] = m.resolved;
  j["same_sentence"] = m.same_sentence;
  return j;
}

ExampleMention mention_from_json(const json& j) {
  ExampleMention m;
  if (j.contains("tokens")) m.tokens = j.at("tokens").get<std::vector<std::string>>();
  m.own = j.value("own", false);
  m.dist = j.value("dist", 0);
  m.resolved = j.value("resolved", true);
  m.same_sentence = j.value("same_sentence", false);
  return m;
}

json example_to_json(const RankingExample& e) {
  json j;
  j["doc_id"] = e.doc_id;
  j["chain_id"] = e.chain_id;
  j["mention_index"] = e.mention_index;
  j["gold"] = e.gold;
  j["original"] = e.original;
  j["original_pos"] = e.original_pos;
  j["original_case"] = to_string(e.original_case);
  j["role"] = to_string(e.role);
  json cands = json::array();
  for (const Candidate& c : e.candidates) cands.push_back(candidate_to_json(c));
  j["candidates"] = cands;
  j["prior_strings"] = e.prior_strings;
  j["previous_string"] = e.previous_string;
  j["left_tokens"] = e.left_tokens;
  j["right_tokens"] = e.right_tokens;
  json lm = json::array(), rm = json::array();
  for (const ExampleMention& m : e.left_mentions) lm.push_back(mention_to_json(m));
  for (const ExampleMention& m : e.right_mentions) rm.push_back(mention_to_json(m));
  j["left_mentions"] = lm;
  j["right_mentions"] = rm;
  return j;
}

RankingExample example_from_json(const json& j) {
  RankingExample e;
  e.doc_id = j.value("doc_id", "");
  e.chain_id = j.value("chain_id", -1);
  e.mention_index = j.value("mention_index", 0);
  e.gold = j.value("gold", "");
  e.original = j.value("original", "");
  e.original_pos = j.value("original_pos", "");
  if (auto c = case_class_from_string(j.value("original_case", "non_pronominal")))
    e.original_case = *c;
  if (auto r = role_from_string(j.value("role", "other"))) e.role = *r;
  if (j.contains("candidates"))
    for (const auto& jc : j.at("candidates")) e.candidates.push_back(candidate_from_json(jc));
  if (j.contains("prior_strings"))
    e.prior_strings = j.at("prior_strings").get<std::vector<std::string>>();
  e.previous_string = j.value("previous_string", "");
  if (j.contains("left_tokens"))
    e.left_tokens = j.at("left_tokens").get<std::vector<std::string>>();
  if (j.contains("right_tokens"))
    e.right_tokens = j.at("right_tokens").get<std::vector<std::string>>();
  if (j.contains("left_mentions"))
    for (const auto& jm : j.at("left_mentions")) e.left_mentions.push_back(mention_from_json(jm));
  if (j.contains("right_mentions"))
    for (const auto& jm : j.at("right_mentions"))
      e.right_mentions.push_back(mention_from_json(jm));
  return e;
}

}  // namespace

ExampleMention to_example_mention(const MentionContext& mc) {
  ExampleMention m;
  m.tokens = mc.tokens;
  m.own = mc.own;
  m.dist = mc.dist;
  m.resolved = mc.resolved;
  m.same_sentence = mc.same_sentence;
  return m;
}

RankingExample example_from_view(const std::string& doc_id, const MentionWalker::SlotView& view,
                                 const std::string& gold) {
  RankingExample e;
  e.doc_id = doc_id;
  e.chain_id = view.slot->chain_id;
  e.mention_index = view.slot->mention_index;
  e.gold = gold;
  e.original = view.slot->original;
  e.original_pos = view.slot->pos;
  e.original_case = view.slot->original_case;
  e.role = view.slot->role;
  e.candidates = *view.candidates;
  e.prior_strings = view.prior_strings;
  e.previous_string = view.previous_string;
  e.left_tokens = view.windows.left_tokens;
  e.right_tokens = view.windows.right_tokens;
  for (const MentionContext& mc : view.windows.left_mentions)
    e.left_mentions.push_back(to_example_mention(mc));
  for (const MentionContext& mc : view.windows.right_mentions)
    e.right_mentions.push_back(to_example_mention(mc));
  return e;
}

std::vector<RankingExample> extract_chain_examples(const Document& doc, int chain_id,
                                                   const WindowConfig& cfg) {
  const CorefChain* chain = doc.chain_by_id(chain_id);
  if (!chain) return {};

  ConversionPlan plan;
  plan.focus_chain = chain_id;
  for (const CorefChain& c : doc.chains)
    if (c.kind == EntityKind::person) plan.context_chains.push_back(c.id);

  std::set<std::string> seen;
  std::vector<Candidate> cands;
  for (const Mention& m : chain->mentions) {
    if (m.in_quote) continue;
    if (seen.insert(m.text).second) cands.push_back(classify_string(m.text));
  }
  canonicalize(cands);
  plan.candidates[chain_id] = std::move(cands);

  for (size_t mi = 0; mi < chain->mentions.size(); ++mi) {
    const Mention& m = chain->mentions[mi];
    MentionSlot s;
    s.chain_id = chain_id;
    s.mention_index = static_cast<int>(mi);
    s.span = m.span;
    s.original = m.text;
    if (m.span.end >= 0 && m.span.end < static_cast<int>(doc.tokens.size()))
      s.pos = doc.tokens[m.span.end].pos;
    s.original_case = m.case_class;
    s.role = m.role;
    s.skip = m.in_quote || m.narrator;
    s.is_focus = true;
    s.gold = m.text;
    plan.slots.push_back(std::move(s));
  }

  MentionWalker walker(doc, plan, {}, cfg);
  std::vector<RankingExample> out;
  walker.walk([&](const MentionWalker::SlotView& v) {
    out.push_back(example_from_view(doc.doc_id, v, v.slot->gold));
    return v.slot->gold;
  });
  return out;
}

std::vector<RankingExample> extract_document_examples(const Document& doc,
                                                      const WindowConfig& cfg) {
  std::vector<RankingExample> out;
  for (int id : select_person_chains(doc)) {
    std::vector<RankingExample> chain_examples = extract_chain_examples(doc, id, cfg);
    out.insert(out.end(), chain_examples.begin(), chain_examples.end());
  }
  return out;
}

std::string examples_to_jsonl(const std::vector<RankingExample>& examples) {
  std::string out;
  for (const RankingExample& e : examples) {
    out += example_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<RankingExample> parse_examples_jsonl(const std::string& text) {
  std::vector<RankingExample> out;
  std::size_t line_no = 0;
  for (const std::string& line : split_char(text, '\n')) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    try {
      out.push_back(example_from_json(json::parse(t)));
    } catch (const std::exception& e) {
      throw std::runtime_error("examples line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<RankingExample> load_examples_jsonl(const std::string& path) {
  return parse_examples_jsonl(read_file(path));
}

void write_examples_jsonl(const std::string& path, const std::vector<RankingExample>& examples) {
  write_file(path, examples_to_jsonl(examples));
}

}  // namespace povshift
