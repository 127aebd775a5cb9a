#include "povshift/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "json.hpp"
#include "povshift/util.hpp"

namespace povshift {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("document load error at " + path + ": " + what);
}

const json& need(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(path + "." + key, "missing required key");
  return obj.at(key);
}

std::string need_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = need(obj, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected string");
  return v.get<std::string>();
}

int need_int(const json& obj, const std::string& key, const std::string& path) {
  const json& v = need(obj, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected integer");
  return v.get<int>();
}

TokenSpan parse_span(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    fail(path, "expected [start, end] integer pair");
  return TokenSpan{v[0].get<int>(), v[1].get<int>()};
}

Person parse_pov(const std::string& s, const std::string& path) {
  if (s == "first") return Person::first;
  if (s == "second") return Person::second;
  if (s == "third") return Person::third;
  fail(path, "unknown pov value '" + s + "'");
}

Gender parse_gender(const std::string& s, const std::string& path) {
  if (s == "masculine") return Gender::masculine;
  if (s == "feminine") return Gender::feminine;
  if (s == "unknown") return Gender::unknown;
  fail(path, "unknown gender value '" + s + "'");
}

Number parse_number(const std::string& s, const std::string& path) {
  if (s == "singular") return Number::singular;
  if (s == "plural") return Number::plural;
  if (s == "unknown") return Number::unknown;
  fail(path, "unknown number value '" + s + "'");
}

}  // namespace

LoadedDocument parse_document_json(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) fail("$", "not valid JSON");
  if (!root.is_object()) fail("$", "expected top-level object");
  int version = root.contains("schema_version") ? root["schema_version"].get<int>() : 0;
  if (version != kDocumentSchemaVersion)
    fail("$.schema_version", "unsupported schema version " + std::to_string(version));

  LoadedDocument out;
  Document& doc = out.doc;
  doc.doc_id = need_string(root, "doc_id", "$");
  doc.source_text = need_string(root, "text", "$");
  if (root.contains("genre")) doc.genre = root["genre"].get<std::string>();

  const json& jtokens = need(root, "tokens", "$");
  if (!jtokens.is_array()) fail("$.tokens", "expected array");
  for (size_t i = 0; i < jtokens.size(); ++i) {
    std::string path = "$.tokens[" + std::to_string(i) + "]";
    const json& jt = jtokens[i];
    Token t;
    t.surface = need_string(jt, "surface", path);
    t.pos = need_string(jt, "pos", path);
    t.lemma = need_string(jt, "lemma", path);
    t.char_start = need_int(jt, "char_start", path);
    t.char_end = need_int(jt, "char_end", path);
    doc.tokens.push_back(std::move(t));
  }

  const json& jsents = need(root, "sentences", "$");
  if (!jsents.is_array()) fail("$.sentences", "expected array");
  for (size_t i = 0; i < jsents.size(); ++i)
    doc.sentences.push_back(parse_span(jsents[i], "$.sentences[" + std::to_string(i) + "]"));

  const json& jchains = need(root, "chains", "$");
  if (!jchains.is_array()) fail("$.chains", "expected array");
  for (size_t ci = 0; ci < jchains.size(); ++ci) {
    std::string cpath = "$.chains[" + std::to_string(ci) + "]";
    const json& jc = jchains[ci];
    CorefChain chain;
    chain.id = need_int(jc, "id", cpath);
    std::string kind = need_string(jc, "kind", cpath);
    if (kind == "person")
      chain.kind = EntityKind::person;
    else if (kind == "other")
      chain.kind = EntityKind::other;
    else
      fail(cpath + ".kind", "unknown kind '" + kind + "'");
    const json& jms = need(jc, "mentions", cpath);
    if (!jms.is_array()) fail(cpath + ".mentions", "expected array");
    for (size_t mi = 0; mi < jms.size(); ++mi) {
      std::string mpath = cpath + ".mentions[" + std::to_string(mi) + "]";
      const json& jm = jms[mi];
      Mention m;
      m.span = parse_span(need(jm, "span", mpath), mpath + ".span");
      if (m.span.start < 0 || m.span.end >= static_cast<int>(doc.tokens.size()) ||
          m.span.start > m.span.end)
        fail(mpath + ".span", "token span out of range");
      m.text = doc.span_text(m.span);
      std::string cs = need_string(jm, "case", mpath);
      auto cc = case_class_from_string(cs);
      if (!cc) fail(mpath + ".case", "unknown case '" + cs + "'");
      m.case_class = *cc;
      std::string rs = need_string(jm, "role", mpath);
      auto role = role_from_string(rs);
      if (!role) fail(mpath + ".role", "unknown role '" + rs + "'");
      m.role = *role;
      const json& jq = need(jm, "in_quote", mpath);
      if (!jq.is_boolean()) fail(mpath + ".in_quote", "expected boolean");
      m.in_quote = jq.get<bool>();
      if (jm.contains("narrator")) m.narrator = jm["narrator"].get<bool>();
      chain.mentions.push_back(std::move(m));
    }
    if (jc.contains("pov"))
      chain.pov = parse_pov(jc["pov"].get<std::string>(), cpath + ".pov");
    else
      chain.pov = infer_chain_pov(doc, chain);
    if (jc.contains("number"))
      chain.number = parse_number(jc["number"].get<std::string>(), cpath + ".number");
    else
      chain.number = infer_chain_number(chain);
    if (jc.contains("gender"))
      chain.gender = parse_gender(jc["gender"].get<std::string>(), cpath + ".gender");
    else
      chain.gender = infer_chain_gender(chain);
    doc.chains.push_back(std::move(chain));
  }

  if (root.contains("quoted_spans")) {
    const json& jq = root["quoted_spans"];
    if (!jq.is_array()) fail("$.quoted_spans", "expected array");
    for (size_t i = 0; i < jq.size(); ++i)
      doc.quoted_spans.push_back(parse_span(jq[i], "$.quoted_spans[" + std::to_string(i) + "]"));
  }

  if (root.contains("deps")) {
    const json& jd = root["deps"];
    if (!jd.is_array()) fail("$.deps", "expected array");
    for (size_t i = 0; i < jd.size(); ++i) {
      std::string path = "$.deps[" + std::to_string(i) + "]";
      DependencyArc arc;
      arc.head = need_int(jd[i], "head", path);
      arc.dep = need_int(jd[i], "dep", path);
      arc.label = need_string(jd[i], "label", path);
      out.deps.push_back(arc);
    }
  }

  if (root.contains("gold_replacements")) {
    const json& jg = root["gold_replacements"];
    if (!jg.is_array()) fail("$.gold_replacements", "expected array");
    for (size_t i = 0; i < jg.size(); ++i) {
      std::string path = "$.gold_replacements[" + std::to_string(i) + "]";
      int chain_id = need_int(jg[i], "chain", path);
      int mention = need_int(jg[i], "mention", path);
      std::string s = need_string(jg[i], "string", path);
      const CorefChain* chain = doc.chain_by_id(chain_id);
      if (!chain) fail(path + ".chain", "unknown chain id " + std::to_string(chain_id));
      if (mention < 0 || mention >= static_cast<int>(chain->mentions.size()))
        fail(path + ".mention", "mention index out of range");
      auto& slot = out.gold.replacements[chain_id];
      if (slot.empty()) {
        // Default every slot to its original string, then overwrite.
        for (const Mention& m : chain->mentions) slot.push_back(m.text);
      }
      slot[mention] = s;
    }
  }

  if (root.contains("gold_verb_changes")) {
    const json& jg = root["gold_verb_changes"];
    if (!jg.is_array()) fail("$.gold_verb_changes", "expected array");
    for (size_t i = 0; i < jg.size(); ++i) {
      std::string path = "$.gold_verb_changes[" + std::to_string(i) + "]";
      int token = need_int(jg[i], "token", path);
      if (token < 0 || token >= static_cast<int>(doc.tokens.size()))
        fail(path + ".token", "token index out of range");
      out.gold.verb_changes[token] = need_string(jg[i], "string", path);
    }
  }

  if (root.contains("gold_candidates")) {
    const json& jg = root["gold_candidates"];
    if (!jg.is_array()) fail("$.gold_candidates", "expected array");
    for (size_t i = 0; i < jg.size(); ++i) {
      std::string path = "$.gold_candidates[" + std::to_string(i) + "]";
      int chain_id = need_int(jg[i], "chain", path);
      const json& js = need(jg[i], "strings", path);
      if (!js.is_array()) fail(path + ".strings", "expected array");
      for (const json& s : js) out.gold.candidates[chain_id].push_back(s.get<std::string>());
    }
  }

  return out;
}

LoadedDocument load_document_json(const std::string& path) {
  return parse_document_json(read_file(path));
}

std::string document_to_json(const LoadedDocument& loaded) {
  const Document& doc = loaded.doc;
  json root;
  root["schema_version"] = kDocumentSchemaVersion;
  root["doc_id"] = doc.doc_id;
  if (!doc.genre.empty()) root["genre"] = doc.genre;
  root["text"] = doc.source_text;
  root["tokens"] = json::array();
  for (const Token& t : doc.tokens)
    root["tokens"].push_back({{"surface", t.surface},
                              {"pos", t.pos},
                              {"lemma", t.lemma},
                              {"char_start", t.char_start},
                              {"char_end", t.char_end}});
  root["sentences"] = json::array();
  for (const TokenSpan& s : doc.sentences) root["sentences"].push_back({s.start, s.end});
  root["chains"] = json::array();
  for (const CorefChain& c : doc.chains) {
    json jc;
    jc["id"] = c.id;
    jc["kind"] = to_string(c.kind);
    jc["pov"] = to_string(c.pov);
    jc["number"] = to_string(c.number);
    jc["gender"] = to_string(c.gender);
    jc["mentions"] = json::array();
    for (const Mention& m : c.mentions) {
      json jm;
      jm["span"] = {m.span.start, m.span.end};
      jm["case"] = to_string(m.case_class);
      jm["role"] = to_string(m.role);
      jm["in_quote"] = m.in_quote;
      if (m.narrator) jm["narrator"] = true;
      jc["mentions"].push_back(std::move(jm));
    }
    root["chains"].push_back(std::move(jc));
  }
  root["quoted_spans"] = json::array();
  for (const TokenSpan& s : doc.quoted_spans) root["quoted_spans"].push_back({s.start, s.end});
  if (!loaded.deps.empty()) {
    root["deps"] = json::array();
    for (const DependencyArc& a : loaded.deps)
      root["deps"].push_back({{"head", a.head}, {"dep", a.dep}, {"label", a.label}});
  }
  if (!loaded.gold.replacements.empty()) {
    root["gold_replacements"] = json::array();
    for (const auto& [chain_id, strings] : loaded.gold.replacements) {
      const CorefChain* chain = doc.chain_by_id(chain_id);
      for (size_t i = 0; i < strings.size(); ++i) {
        if (chain && i < chain->mentions.size() && strings[i] == chain->mentions[i].text)
          continue;  // unchanged slots are implicit
        root["gold_replacements"].push_back(
            {{"chain", chain_id}, {"mention", static_cast<int>(i)}, {"string", strings[i]}});
      }
    }
  }
  if (!loaded.gold.verb_changes.empty()) {
    root["gold_verb_changes"] = json::array();
    for (const auto& [token, s] : loaded.gold.verb_changes)
      root["gold_verb_changes"].push_back({{"token", token}, {"string", s}});
  }
  if (!loaded.gold.candidates.empty()) {
    root["gold_candidates"] = json::array();
    for (const auto& [chain_id, strings] : loaded.gold.candidates)
      root["gold_candidates"].push_back({{"chain", chain_id}, {"strings", strings}});
  }
  return root.dump(2) + "\n";
}

std::string conversion_to_json(const ConversionResult& res) {
  json root;
  root["doc_id"] = res.doc_id;
  root["mention_edits"] = json::array();
  for (const MentionEdit& e : res.mention_edits) {
    json je;
    je["char_start"] = e.char_start;
    je["char_end"] = e.char_end;
    je["old"] = e.old_text;
    je["new"] = e.new_text;
    je["chain_id"] = e.chain_id;
    je["mention"] = e.mention_index;
    je["selected"] = e.selected;
    if (!e.note.empty()) je["note"] = e.note;
    root["mention_edits"].push_back(std::move(je));
  }
  root["verb_edits"] = json::array();
  for (const VerbEdit& e : res.verb_edits)
    root["verb_edits"].push_back({{"char_start", e.char_start},
                                  {"char_end", e.char_end},
                                  {"old", e.old_text},
                                  {"new", e.new_text},
                                  {"token", e.token},
                                  {"rule", e.rule}});
  root["text"] = res.text;
  return root.dump(2) + "\n";
}

ConversionResult parse_conversion_json(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded() || !root.is_object()) fail("$", "not a valid conversion JSON");
  ConversionResult res;
  res.doc_id = need_string(root, "doc_id", "$");
  res.text = need_string(root, "text", "$");
  const json& jm = need(root, "mention_edits", "$");
  for (size_t i = 0; i < jm.size(); ++i) {
    std::string path = "$.mention_edits[" + std::to_string(i) + "]";
    MentionEdit e;
    e.char_start = need_int(jm[i], "char_start", path);
    e.char_end = need_int(jm[i], "char_end", path);
    e.old_text = need_string(jm[i], "old", path);
    e.new_text = need_string(jm[i], "new", path);
    e.chain_id = need_int(jm[i], "chain_id", path);
    e.mention_index = need_int(jm[i], "mention", path);
    e.selected = need_string(jm[i], "selected", path);
    if (jm[i].contains("note")) e.note = jm[i]["note"].get<std::string>();
    res.mention_edits.push_back(std::move(e));
  }
  const json& jv = need(root, "verb_edits", "$");
  for (size_t i = 0; i < jv.size(); ++i) {
    std::string path = "$.verb_edits[" + std::to_string(i) + "]";
    VerbEdit e;
    e.char_start = need_int(jv[i], "char_start", path);
    e.char_end = need_int(jv[i], "char_end", path);
    e.old_text = need_string(jv[i], "old", path);
    e.new_text = need_string(jv[i], "new", path);
    e.token = need_int(jv[i], "token", path);
    e.rule = need_string(jv[i], "rule", path);
    res.verb_edits.push_back(std::move(e));
  }
  return res;
}

std::string apply_capitalization(const Document& doc, const TokenSpan& span,
                                 const std::string& replacement) {
  bool sentence_initial = false;
  for (const TokenSpan& s : doc.sentences)
    if (s.start == span.start) sentence_initial = true;
  if (!sentence_initial || replacement.empty()) return replacement;
  std::string out = replacement;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

namespace {

struct RawEdit {
  int char_start;
  int char_end;
  std::string text;
};

}  // namespace

std::string render_edits(const Document& doc, const std::vector<MentionEdit>& mention_edits,
                         const std::vector<VerbEdit>& verb_edits) {
  std::vector<RawEdit> edits;
  for (const MentionEdit& e : mention_edits) {
    if (e.new_text == e.old_text) continue;
    edits.push_back({e.char_start, e.char_end, e.new_text});
  }
  for (const VerbEdit& e : verb_edits) edits.push_back({e.char_start, e.char_end, e.new_text});
  std::sort(edits.begin(), edits.end(),
            [](const RawEdit& a, const RawEdit& b) { return a.char_start < b.char_start; });
  for (size_t i = 1; i < edits.size(); ++i)
    if (edits[i].char_start < edits[i - 1].char_end)
      throw std::runtime_error("render_edits: overlapping edits at char " +
                               std::to_string(edits[i].char_start));
  std::string out;
  int cursor = 0;
  for (const RawEdit& e : edits) {
    out += doc.source_text.substr(cursor, e.char_start - cursor);
    out += e.text;
    cursor = e.char_end;
  }
  out += doc.source_text.substr(cursor);
  return out;
}

ConversionResult gold_conversion(const LoadedDocument& loaded) {
  const Document& doc = loaded.doc;
  ConversionResult res;
  res.doc_id = doc.doc_id;
  for (const auto& [chain_id, strings] : loaded.gold.replacements) {
    const CorefChain* chain = doc.chain_by_id(chain_id);
    if (!chain) continue;
    for (size_t i = 0; i < strings.size() && i < chain->mentions.size(); ++i) {
      const Mention& m = chain->mentions[i];
      MentionEdit e;
      e.chain_id = chain_id;
      e.mention_index = static_cast<int>(i);
      e.span = m.span;
      e.char_start = doc.tokens[m.span.start].char_start;
      e.char_end = doc.tokens[m.span.end].char_end;
      e.old_text = doc.source_text.substr(e.char_start, e.char_end - e.char_start);
      e.selected = strings[i];
      e.new_text = apply_capitalization(doc, m.span, strings[i]);
      e.note = "gold";
      res.mention_edits.push_back(std::move(e));
    }
  }
  std::sort(res.mention_edits.begin(), res.mention_edits.end(),
            [](const MentionEdit& a, const MentionEdit& b) { return a.char_start < b.char_start; });
  for (const auto& [token, s] : loaded.gold.verb_changes) {
    const Token& t = doc.tokens[token];
    VerbEdit e;
    e.token = token;
    e.char_start = t.char_start;
    e.char_end = t.char_end;
    e.old_text = t.surface;
    e.new_text = s;
    e.rule = "gold";
    res.verb_edits.push_back(std::move(e));
  }
  res.text = render_edits(doc, res.mention_edits, res.verb_edits);
  return res;
}

}  // namespace povshift
