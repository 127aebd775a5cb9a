#include "povshift/candidates.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "povshift/util.hpp"

namespace povshift {

std::string to_string(CandidateKind k) {
  switch (k) {
    case CandidateKind::proper_np: return "proper_np";
    case CandidateKind::pronoun: return "pronoun";
    case CandidateKind::common_np: return "common_np";
  }
  return "common_np";
}

RelationalLexicon RelationalLexicon::load(const std::string& path) {
  return parse(read_file(path));
}

RelationalLexicon RelationalLexicon::parse(const std::string& tsv_text) {
  RelationalLexicon lex;
  size_t lineno = 0;
  for (const std::string& raw : split_char(tsv_text, '\n')) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split_char(raw, '\t');
    if (cols.size() != 3)
      throw std::runtime_error("relational lexicon line " + std::to_string(lineno) +
                               ": expected 3 tab-separated columns");
    lex.entries_[lowercase(trim(cols[0]))] = Entry{trim(cols[1]), trim(cols[2])};
  }
  return lex;
}

const RelationalLexicon::Entry* RelationalLexicon::lookup(const std::string& noun_lower) const {
  auto it = entries_.find(noun_lower);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

int kind_rank(CandidateKind k) {
  switch (k) {
    case CandidateKind::proper_np: return 0;
    case CandidateKind::pronoun: return 1;
    case CandidateKind::common_np: return 2;
  }
  return 2;
}

bool is_possessive_string(const std::string& s) {
  return ends_with(s, "'s") || ends_with(s, "’s") || ends_with(s, "s'");
}

bool looks_proper(const std::string& s) {
  bool any = false;
  for (const std::string& w : split_ws(s)) {
    if (!std::isalpha(static_cast<unsigned char>(w[0]))) continue;
    if (!std::isupper(static_cast<unsigned char>(w[0]))) return false;
    any = true;
  }
  return any;
}

void add_candidate(std::vector<Candidate>& out, std::string text, CandidateKind kind,
                   std::vector<CaseClass> cases, std::string source) {
  // Conversion output must never contain a deictic pronoun.
  if (is_first_or_second_pronoun(text)) return;
  out.push_back(Candidate{std::move(text), kind, std::move(cases), std::move(source)});
}

void add_pronoun_inventory(std::vector<Candidate>& out, Gender gender) {
  auto add = [&](const std::string& s) {
    const PronounInfo* info = lookup_pronoun(s);
    add_candidate(out, s, CandidateKind::pronoun, info->cases, "pronoun");
  };
  if (gender == Gender::masculine) {
    add("he");
    add("him");
    add("his");
    add("himself");
    add("he himself");
  } else {
    add("she");
    add("her");
    add("herself");
    add("she herself");
  }
}

// Leftmost token of the noun phrase headed by `head`: determiners, adjectives
// and compound nouns hanging directly off the head.
TokenSpan np_span(const std::vector<DependencyArc>& deps, int head,
                  const DependencyRules& rules) {
  static const std::set<std::string> np_labels = {"det",    "amod", "compound",
                                                  "nn",     "num",  "nummod"};
  int start = head;
  for (const DependencyArc& arc : deps) {
    if (arc.head != head) continue;
    if (np_labels.count(arc.label) || rules.possessive_labels.count(arc.label))
      start = std::min(start, arc.dep);
  }
  return TokenSpan{start, head};
}

bool token_in_focus_mention(const CorefChain& focus, int token) {
  for (const Mention& m : focus.mentions)
    if (!m.in_quote && m.span.contains(token)) return true;
  return false;
}

// Chain owning a mention that covers the given token, excluding the focus.
const CorefChain* owning_chain(const Document& doc, int token, int focus_id) {
  for (const CorefChain& c : doc.chains) {
    if (c.id == focus_id) continue;
    for (const Mention& m : c.mentions)
      if (m.span.contains(token)) return &c;
  }
  return nullptr;
}

std::vector<std::string> proper_name_strings(const Document& doc, const CorefChain& chain) {
  std::vector<std::string> out;
  for (const Mention& m : chain.mentions) {
    bool all_proper = true;
    for (int i = m.span.start; i <= m.span.end; ++i)
      if (doc.tokens[i].pos != "NNP" && doc.tokens[i].pos != "NNPS") all_proper = false;
    if (all_proper && std::find(out.begin(), out.end(), m.text) == out.end())
      out.push_back(m.text);
  }
  return out;
}

std::string possessive_form(const std::string& name) {
  if (ends_with(name, "s")) return name + "'";
  return name + "'s";
}

}  // namespace

void canonicalize(std::vector<Candidate>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    int ra = kind_rank(a.kind), rb = kind_rank(b.kind);
    if (ra != rb) return ra < rb;
    return a.text < b.text;
  });
  std::vector<Candidate> merged;
  for (Candidate& c : candidates) {
    if (!merged.empty() && merged.back().text == c.text) {
      for (CaseClass cc : c.cases)
        if (!merged.back().fits(cc)) merged.back().cases.push_back(cc);
      continue;
    }
    merged.push_back(std::move(c));
  }
  candidates = std::move(merged);
}

std::vector<Candidate> build_focus_candidates(const Document& doc,
                                              const std::vector<DependencyArc>& deps,
                                              const CorefChain& focus, const EntitySpec& spec,
                                              const RelationalLexicon& relational,
                                              const DependencyRules& rules) {
  if (spec.gender == Gender::unknown)
    throw std::invalid_argument("build_focus_candidates: focus gender must be given");
  std::vector<Candidate> out;

  std::vector<std::string> names;
  for (const std::string& n : {spec.full_name, spec.given_name, spec.family_name})
    if (!n.empty() && std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  for (const std::string& n : names) {
    add_candidate(out, n, CandidateKind::proper_np,
                  {CaseClass::nominative, CaseClass::accusative}, "name");
    add_candidate(out, possessive_form(n), CandidateKind::proper_np, {CaseClass::possessive},
                  "name");
  }

  add_pronoun_inventory(out, spec.gender);

  // Predicate nominals ("I was a carpenter") and appositives ("I, a carpenter").
  std::set<int> cop_heads;
  for (const DependencyArc& arc : deps)
    if (arc.label == "cop") cop_heads.insert(arc.head);
  for (const DependencyArc& arc : deps) {
    if (rules.subject_labels.count(arc.label) && cop_heads.count(arc.head) &&
        token_in_focus_mention(focus, arc.dep)) {
      const std::string& pos = doc.tokens[arc.head].pos;
      if (pos != "NN" && pos != "NNS" && pos != "NNP" && pos != "NNPS") continue;
      TokenSpan span = np_span(deps, arc.head, rules);
      CandidateKind kind = (pos == "NNP" || pos == "NNPS") ? CandidateKind::proper_np
                                                           : CandidateKind::common_np;
      add_candidate(out, doc.span_text(span), kind,
                    {CaseClass::nominative, CaseClass::accusative}, "predicate_nominal");
    }
    if (arc.label == "appos" && token_in_focus_mention(focus, arc.head)) {
      TokenSpan span = np_span(deps, arc.dep, rules);
      add_candidate(out, doc.span_text(span), CandidateKind::common_np,
                    {CaseClass::nominative, CaseClass::accusative}, "appositive");
    }
  }

  // Relational converses from possessive constructions headed by the focus.
  for (const DependencyArc& arc : deps) {
    if (!rules.possessive_labels.count(arc.label)) continue;
    if (!token_in_focus_mention(focus, arc.dep)) continue;
    const std::string noun = lowercase(doc.tokens[arc.head].lemma.empty()
                                           ? doc.tokens[arc.head].surface
                                           : doc.tokens[arc.head].lemma);
    const RelationalLexicon::Entry* entry = relational.lookup(noun);
    if (!entry) continue;
    const std::string& converse = spec.gender == Gender::masculine ? entry->masculine_converse
                                                                   : entry->feminine_converse;
    // Gender of the related party: chain evidence first, then the noun itself.
    Gender related = Gender::unknown;
    const CorefChain* related_chain = owning_chain(doc, arc.head, focus.id);
    if (related_chain) related = related_chain->gender;
    if (related == Gender::unknown) related = kinship_noun_gender(noun);
    std::vector<std::string> possessors;
    if (related == Gender::masculine)
      possessors = {"his"};
    else if (related == Gender::feminine)
      possessors = {"her"};
    else
      possessors = {"his", "her"};
    for (const std::string& p : possessors)
      add_candidate(out, p + " " + converse, CandidateKind::common_np,
                    {CaseClass::nominative, CaseClass::accusative}, "relational");
    if (related_chain)
      for (const std::string& name : proper_name_strings(doc, *related_chain))
        add_candidate(out, possessive_form(name) + " " + converse, CandidateKind::common_np,
                      {CaseClass::nominative, CaseClass::accusative}, "relational");
  }

  canonicalize(out);
  return out;
}

Candidate classify_string(const std::string& text) {
  if (const PronounInfo* info = lookup_pronoun(lowercase(text)))
    return Candidate{text, CandidateKind::pronoun, info->cases, "chain_string"};
  std::vector<CaseClass> cases;
  if (is_possessive_string(text))
    cases = {CaseClass::possessive};
  else
    cases = {CaseClass::nominative, CaseClass::accusative};
  CandidateKind kind = looks_proper(text) ? CandidateKind::proper_np : CandidateKind::common_np;
  return Candidate{text, kind, cases, "chain_string"};
}

std::vector<Candidate> build_confounder_candidates(const CorefChain& chain, Gender focus_gender) {
  std::vector<Candidate> out;
  bool plural_deictic = chain.number == Number::plural && chain.pov != Person::third;
  if (plural_deictic) {
    auto add = [&](const std::string& s) {
      const PronounInfo* info = lookup_pronoun(s);
      add_candidate(out, s, CandidateKind::pronoun, info->cases, "pronoun");
    };
    add("they");
    add("them");
    add("their");
    add("theirs");
    add("themselves");
    // Coordinations that include the narrator: rewrite the deictic conjunct.
    for (const Mention& m : chain.mentions) {
      std::vector<std::string> words = split_ws(m.text);
      bool has_and = false, has_deictic = false;
      for (const std::string& w : words) {
        if (lowercase(w) == "and") has_and = true;
        if (is_first_or_second_pronoun(w)) has_deictic = true;
      }
      if (!has_and || !has_deictic) continue;
      std::vector<std::string> rewritten;
      bool ok = true;
      for (const std::string& w : words) {
        if (!is_first_or_second_pronoun(w)) {
          rewritten.push_back(w);
          continue;
        }
        const PronounInfo* info = lookup_pronoun(lowercase(w));
        if (info->number != Number::singular) {
          ok = false;
          break;
        }
        auto rep = agreement_pronoun(focus_gender, Number::singular,
                                     info->cases.empty() ? CaseClass::accusative : info->cases[0]);
        if (!rep) {
          ok = false;
          break;
        }
        rewritten.push_back(*rep);
      }
      if (ok)
        add_candidate(out, join(rewritten, " "), CandidateKind::common_np,
                      {CaseClass::nominative, CaseClass::accusative}, "coordination");
    }
  } else {
    for (const Mention& m : chain.mentions) out.push_back(classify_string(m.text));
  }
  canonicalize(out);
  return out;
}

std::vector<Candidate> narrow_by_case(const std::vector<Candidate>& candidates,
                                      CaseClass original_case, bool* fell_back) {
  if (fell_back) *fell_back = false;
  if (original_case == CaseClass::non_pronominal) return candidates;
  std::vector<Candidate> out;
  for (const Candidate& c : candidates) {
    switch (original_case) {
      case CaseClass::reflexive:
        if (c.fits(CaseClass::reflexive)) out.push_back(c);
        break;
      case CaseClass::possessive:
        if (c.fits(CaseClass::possessive)) out.push_back(c);
        break;
      case CaseClass::nominative:
      case CaseClass::accusative:
        if (c.kind == CandidateKind::pronoun) {
          if (c.fits(original_case)) out.push_back(c);
        } else if (!c.fits(CaseClass::possessive)) {
          out.push_back(c);
        }
        break;
      default:
        break;
    }
  }
  if (out.empty()) {
    if (fell_back) *fell_back = true;
    return candidates;
  }
  return out;
}

CaseClass mention_case(const Document& doc, const TokenSpan& span, GrammaticalRole role) {
  if (span.length() != 1) {
    std::string text = doc.span_text(span);
    if (!is_pronoun(text)) return CaseClass::non_pronominal;
    return classify_pronoun_case(lowercase(text), "", role == GrammaticalRole::subject);
  }
  const Token& t = doc.tokens[span.start];
  if (!is_pronoun(t.surface)) return CaseClass::non_pronominal;
  return classify_pronoun_case(lowercase(t.surface), t.pos, role == GrammaticalRole::subject);
}

}  // namespace povshift
