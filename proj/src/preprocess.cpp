#include "povshift/preprocess.hpp"

#include <algorithm>

#include "povshift/candidates.hpp"
#include "povshift/util.hpp"

namespace povshift {

namespace {

bool is_open_quote(const std::string& s) { return s == "``" || s == "“"; }
bool is_close_quote(const std::string& s) { return s == "''" || s == "”"; }
bool is_straight_quote(const std::string& s) { return s == "\""; }

}  // namespace

std::vector<TokenSpan> detect_quoted_spans(const std::vector<Token>& tokens,
                                           const std::vector<TokenSpan>& sentences,
                                           std::vector<std::string>* warnings) {
  std::vector<TokenSpan> out;
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  for (size_t si = 0; si < sentences.size(); ++si) {
    const TokenSpan& sent = sentences[si];
    int open_pos = -1;
    bool open = false;
    for (int i = sent.start; i <= sent.end; ++i) {
      const std::string& s = tokens[i].surface;
      bool opener = is_open_quote(s) || (is_straight_quote(s) && !open);
      bool closer = is_close_quote(s) || (is_straight_quote(s) && open);
      if (open && closer) {
        if (i - 1 >= open_pos + 1) out.push_back(TokenSpan{open_pos + 1, i - 1});
        open = false;
      } else if (!open && opener) {
        open = true;
        open_pos = i;
      } else if (!open && is_close_quote(s)) {
        // Sentence starts inside a quotation carried over from earlier text.
        if (i - 1 >= sent.start) out.push_back(TokenSpan{sent.start, i - 1});
        warn("sentence " + std::to_string(si) + ": closing quote without opener");
      }
    }
    if (open) {
      if (sent.end >= open_pos + 1) out.push_back(TokenSpan{open_pos + 1, sent.end});
      warn("sentence " + std::to_string(si) + ": unbalanced quote closed at sentence end");
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TokenSpan& a, const TokenSpan& b) { return a.start < b.start; });
  return out;
}

PerformativeLexicon PerformativeLexicon::load(const std::string& path) {
  return parse(read_file(path));
}

PerformativeLexicon PerformativeLexicon::parse(const std::string& text) {
  PerformativeLexicon lex;
  for (const std::string& raw : split_char(text, '\n')) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    lex.lemmas_.insert(lowercase(line));
  }
  return lex;
}

std::vector<std::pair<int, int>> detect_narrator_mentions(Document& doc,
                                                          const std::vector<DependencyArc>& deps,
                                                          const PerformativeLexicon& lexicon,
                                                          const DependencyRules& rules) {
  std::vector<std::pair<int, int>> flagged;
  auto lemma_of = [&](int idx) {
    const Token& t = doc.tokens[idx];
    return lowercase(t.lemma.empty() ? t.surface : t.lemma);
  };
  auto is_performative_present = [&](int idx) {
    return lexicon.contains(lemma_of(idx)) &&
           tense_from_pos(doc.tokens[idx].pos) == VerbTense::present &&
           starts_with(doc.tokens[idx].pos, "VB");
  };
  for (size_t ci = 0; ci < doc.chains.size(); ++ci) {
    CorefChain& chain = doc.chains[ci];
    for (size_t mi = 0; mi < chain.mentions.size(); ++mi) {
      Mention& m = chain.mentions[mi];
      if (m.in_quote || m.span.length() != 1) continue;
      if (lowercase(m.text) != "i") continue;
      bool hit = false;
      for (const DependencyArc& arc : deps) {
        if (!rules.subject_labels.count(arc.label) || arc.dep != m.span.start) continue;
        if (is_performative_present(arc.head)) hit = true;
      }
      if (deps.empty()) {
        int next = m.span.end + 1;
        if (next < static_cast<int>(doc.tokens.size()) && is_performative_present(next))
          hit = true;
      }
      if (hit) {
        m.narrator = true;
        flagged.emplace_back(static_cast<int>(ci), static_cast<int>(mi));
      }
    }
  }
  return flagged;
}

int identify_focus_chain(const Document& doc, const EntitySpec& spec) {
  std::vector<int> pov_matches;
  for (const CorefChain& c : doc.chains)
    if (c.pov == spec.from_pov) pov_matches.push_back(c.id);
  if (pov_matches.empty())
    throw IdentificationError(
        "no chain with " + to_string(spec.from_pov) + "-person point of view", {});
  if (pov_matches.size() == 1) return pov_matches[0];

  std::vector<std::string> names;
  for (const std::string& n : {spec.full_name, spec.given_name, spec.family_name})
    if (!n.empty()) names.push_back(n);
  auto list = [&](const std::vector<int>& ids) {
    std::vector<std::string> parts;
    for (int id : ids) parts.push_back(std::to_string(id));
    return join(parts, ", ");
  };
  if (names.empty())
    throw IdentificationError("multiple chains match the requested point of view (chains " +
                                  list(pov_matches) + ") and no focus name was given",
                              pov_matches);

  std::vector<int> name_matches;
  for (int id : pov_matches) {
    const CorefChain* c = doc.chain_by_id(id);
    for (const Mention& m : c->mentions)
      if (std::find(names.begin(), names.end(), m.text) != names.end()) {
        name_matches.push_back(id);
        break;
      }
  }
  if (name_matches.empty())
    throw IdentificationError("multiple chains match the requested point of view (chains " +
                                  list(pov_matches) + ") and none mentions the focus name",
                              pov_matches);
  // Ties go to the largest chain.
  int best = name_matches[0];
  for (int id : name_matches) {
    size_t n_best = doc.chain_by_id(best)->mentions.size();
    size_t n_cur = doc.chain_by_id(id)->mentions.size();
    if (n_cur > n_best || (n_cur == n_best && id < best)) best = id;
  }
  return best;
}

ConfounderSets identify_confounders(const Document& doc, int focus_id, Gender focus_gender,
                                    Person from_pov) {
  ConfounderSets out;
  for (const CorefChain& c : doc.chains) {
    if (c.id == focus_id) continue;
    if (c.number == Number::plural && c.pov == from_pov && from_pov != Person::third) {
      out.plural_deictic.push_back(c.id);
      continue;
    }
    bool has_matching_pronoun = false;
    for (const Mention& m : c.mentions)
      if (!m.in_quote && is_third_singular_pronoun(m.text, focus_gender))
        has_matching_pronoun = true;
    if (has_matching_pronoun) out.singular.push_back(c.id);
  }
  return out;
}

GrammaticalRole role_from_deps(const std::vector<DependencyArc>& deps, const TokenSpan& span,
                               const DependencyRules& rules) {
  static const std::set<std::string> object_labels = {"obj", "dobj", "iobj", "pobj"};
  for (const DependencyArc& arc : deps) {
    if (!span.contains(arc.dep)) continue;
    if (rules.subject_labels.count(arc.label)) return GrammaticalRole::subject;
    if (object_labels.count(arc.label)) return GrammaticalRole::object;
  }
  return GrammaticalRole::other;
}

namespace {

class GoldCoref : public CorefProvider {
 public:
  explicit GoldCoref(LoadedDocument doc) : doc_(std::move(doc)) {}
  std::string version() const override { return "gold-v1"; }
  AnnotationBundle annotate(const std::string& text) override {
    if (text != doc_.doc.source_text)
      throw AnnotationError("gold-coref", version(), "text differs from the stored document");
    AnnotationBundle b;
    b.tokens = doc_.doc.tokens;
    b.sentences = doc_.doc.sentences;
    b.chains = doc_.doc.chains;
    return b;
  }

 private:
  LoadedDocument doc_;
};

class GoldNer : public NerProvider {
 public:
  explicit GoldNer(LoadedDocument doc) : doc_(std::move(doc)) {}
  std::string version() const override { return "gold-v1"; }
  std::vector<NerSpan> tag(const Document&) override {
    std::vector<NerSpan> out;
    for (const CorefChain& c : doc_.doc.chains) {
      if (c.kind != EntityKind::person) continue;
      for (const Mention& m : c.mentions)
        if (!is_pronoun(m.text)) out.push_back(NerSpan{m.span, "PERSON"});
    }
    return out;
  }

 private:
  LoadedDocument doc_;
};

class GoldDeps : public DepProvider {
 public:
  explicit GoldDeps(std::vector<DependencyArc> deps) : deps_(std::move(deps)) {}
  std::string version() const override { return "gold-v1"; }
  std::vector<DependencyArc> parse(const Document&) override { return deps_; }

 private:
  std::vector<DependencyArc> deps_;
};

}  // namespace

AnnotationAdapters make_gold_adapters(const LoadedDocument& loaded) {
  AnnotationAdapters a;
  a.coref = std::make_shared<GoldCoref>(loaded);
  a.ner = std::make_shared<GoldNer>(loaded);
  a.deps = std::make_shared<GoldDeps>(loaded.deps);
  return a;
}

LoadedDocument annotate(const std::string& raw_text, const AnnotationAdapters& adapters,
                        std::vector<std::string>* warnings) {
  if (!adapters.coref) throw AnnotationError("coref", "none", "no coreference provider configured");
  AnnotationBundle bundle = adapters.coref->annotate(raw_text);

  LoadedDocument out;
  Document& doc = out.doc;
  doc.doc_id = "annotated";
  doc.source_text = raw_text;
  doc.tokens = std::move(bundle.tokens);
  doc.sentences = std::move(bundle.sentences);
  doc.quoted_spans = detect_quoted_spans(doc.tokens, doc.sentences, warnings);

  std::vector<NerSpan> persons;
  if (adapters.ner)
    for (const NerSpan& s : adapters.ner->tag(doc))
      if (s.label == "PERSON") persons.push_back(s);
  if (adapters.deps) out.deps = adapters.deps->parse(doc);

  DependencyRules rules = DependencyRules::defaults();
  for (CorefChain& chain : bundle.chains) {
    bool person = chain.kind == EntityKind::person;
    for (Mention& m : chain.mentions) {
      m.text = doc.span_text(m.span);
      m.in_quote = doc.in_quoted_span(m.span);
      if (m.role == GrammaticalRole::other && !out.deps.empty())
        m.role = role_from_deps(out.deps, m.span, rules);
      if (m.case_class == CaseClass::non_pronominal && is_pronoun(m.text))
        m.case_class = mention_case(doc, m.span, m.role);
      for (const NerSpan& s : persons)
        if (s.span.overlaps(m.span)) person = true;
      if (is_human_pronoun(m.text)) person = true;
    }
    if (!person) continue;
    chain.kind = EntityKind::person;
    std::stable_sort(chain.mentions.begin(), chain.mentions.end(),
                     [](const Mention& a, const Mention& b) { return a.span.start < b.span.start; });
    chain.pov = infer_chain_pov(doc, chain);
    chain.number = infer_chain_number(chain);
    if (chain.gender == Gender::unknown) chain.gender = infer_chain_gender(chain);
    doc.chains.push_back(std::move(chain));
  }
  return out;
}

}  // namespace povshift
