#include "povshift/morph.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "povshift/util.hpp"

namespace povshift {

VerbTense tense_from_pos(const std::string& pos) {
  if (pos == "VBD" || pos == "VBN") return VerbTense::past;
  if (pos == "MD") return VerbTense::modal;
  return VerbTense::present;
}

bool is_finite_verb_pos(const std::string& pos) {
  return pos == "VBZ" || pos == "VBP" || pos == "VBD" || pos == "MD";
}

VerbDictionary VerbDictionary::load(const std::string& path) {
  return parse(read_file(path));
}

VerbDictionary VerbDictionary::parse(const std::string& tsv_text) {
  VerbDictionary dict;
  size_t lineno = 0;
  for (const std::string& raw : split_char(tsv_text, '\n')) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split_char(raw, '\t');
    if (cols.size() != 4)
      throw std::runtime_error("verb dictionary line " + std::to_string(lineno) +
                               ": expected 4 tab-separated columns, got " +
                               std::to_string(cols.size()));
    dict.add(lowercase(trim(cols[0])),
             VerbEntry{trim(cols[1]), trim(cols[2]), trim(cols[3])});
  }
  return dict;
}

void VerbDictionary::add(const std::string& lemma, VerbEntry entry) {
  entries_[lemma] = std::move(entry);
}

const VerbEntry* VerbDictionary::lookup(const std::string& lemma_lower) const {
  auto it = entries_.find(lemma_lower);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// The suffix rules: +es after s/sh/ch/x/z/o, consonant+y -> ies, else +s.
std::pair<std::string, std::string> apply_suffix_rules(const std::string& base) {
  if (base.empty()) return {base, "suffix_s"};
  char last = base.back();
  if (last == 's' || last == 'x' || last == 'z' || last == 'o' ||
      ends_with(base, "sh") || ends_with(base, "ch"))
    return {base + "es", "suffix_es"};
  if (last == 'y' && base.size() >= 2 && !is_vowel(base[base.size() - 2]))
    return {base.substr(0, base.size() - 1) + "ies", "suffix_ies"};
  return {base + "s", "suffix_s"};
}

const std::map<std::string, std::string>& irregular_present() {
  static const std::map<std::string, std::string> table = {
      {"am", "is"}, {"are", "is"}, {"is", "is"},
      {"have", "has"}, {"has", "has"},
      {"do", "does"}, {"does", "does"},
  };
  return table;
}

bool is_modal(const std::string& f) {
  static const std::set<std::string> modals = {"can",  "could",  "may",   "might", "must",
                                               "shall", "should", "will",  "would", "ought"};
  return modals.count(f) > 0;
}

std::string match_case(const std::string& original, const std::string& replacement) {
  if (original.empty() || replacement.empty()) return replacement;
  if (std::isupper(static_cast<unsigned char>(original[0]))) {
    std::string out = replacement;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
  }
  return replacement;
}

}  // namespace

ConjugationResult conjugate_third_singular(const std::string& form, const std::string& lemma,
                                           VerbTense tense, const VerbDictionary& dict) {
  std::string f = lowercase(form);
  std::string lem = lowercase(lemma);

  // Clitic auxiliaries. 'd stays ambiguous (would/had) and is left alone.
  if (!f.empty() && (f[0] == '\'' || starts_with(f, "’"))) {
    std::string tail = f[0] == '\'' ? f.substr(1) : f.substr(3);
    if (tail == "m" || tail == "re" || tail == "ve") {
      std::string apo = f[0] == '\'' ? "'" : "’";
      return {apo + "s", "contraction"};
    }
    return {form, "unchanged"};
  }

  if (tense == VerbTense::modal || is_modal(f)) return {form, "unchanged"};

  if (tense == VerbTense::past) {
    // Only "be" inflects for person in the past.
    if (f == "were") return {match_case(form, "was"), "irregular"};
    return {form, "unchanged"};
  }

  std::string target;
  std::string rule;
  if (const VerbEntry* entry = lem.empty() ? nullptr : dict.lookup(lem)) {
    target = entry->third_singular;
    rule = "dictionary";
  } else if (auto it = irregular_present().find(f); it != irregular_present().end()) {
    target = it->second;
    rule = "irregular";
  } else {
    std::string base = lem.empty() ? f : lem;
    auto [t, r] = apply_suffix_rules(base);
    target = t;
    rule = r;
  }
  if (target == f) return {form, "unchanged"};
  return {match_case(form, target), rule};
}

DependencyRules DependencyRules::defaults() {
  DependencyRules r;
  r.subject_labels = {"nsubj", "nsubjpass", "nsubj:pass", "csubj"};
  r.verb_chain_labels = {"aux", "auxpass", "aux:pass", "cop"};
  r.possessive_labels = {"poss", "nmod:poss"};
  return r;
}

DependencyRules DependencyRules::load(const std::string& path) {
  DependencyRules r;
  size_t lineno = 0;
  for (const std::string& raw : split_char(read_file(path), '\n')) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> parts = split_ws(line);
    if (parts.size() != 2)
      throw std::runtime_error("dependency rules line " + std::to_string(lineno) +
                               ": expected '<group> <label>'");
    if (parts[0] == "subject")
      r.subject_labels.insert(parts[1]);
    else if (parts[0] == "chain")
      r.verb_chain_labels.insert(parts[1]);
    else if (parts[0] == "possessive")
      r.possessive_labels.insert(parts[1]);
    else
      throw std::runtime_error("dependency rules line " + std::to_string(lineno) +
                               ": unknown group '" + parts[0] + "'");
  }
  return r;
}

namespace {

// Hops from a subject-arc head to the token that actually carries agreement.
// Copulas and auxiliaries hang off non-verb or non-finite heads.
int resolve_finite_verb(const Document& doc, const std::vector<DependencyArc>& deps, int head,
                        const DependencyRules& rules) {
  if (head < 0 || head >= static_cast<int>(doc.tokens.size())) return -1;
  if (is_finite_verb_pos(doc.tokens[head].pos)) return head;
  int best = -1;
  for (const DependencyArc& arc : deps) {
    if (arc.head != head || !rules.verb_chain_labels.count(arc.label)) continue;
    if (arc.dep < 0 || arc.dep >= static_cast<int>(doc.tokens.size())) continue;
    if (!is_finite_verb_pos(doc.tokens[arc.dep].pos)) continue;
    if (best < 0 || arc.dep < best) best = arc.dep;
  }
  return best;
}

}  // namespace

std::vector<int> find_agreement_verbs(const Document& doc, const std::vector<DependencyArc>& deps,
                                      const CorefChain& focus, const DependencyRules& rules) {
  std::vector<int> out;
  for (const DependencyArc& arc : deps) {
    if (!rules.subject_labels.count(arc.label)) continue;
    bool subject_in_focus = false;
    for (const Mention& m : focus.mentions) {
      if (m.in_quote || m.narrator) continue;
      if (m.span.contains(arc.dep)) {
        subject_in_focus = true;
        break;
      }
    }
    if (!subject_in_focus) continue;
    int verb = resolve_finite_verb(doc, deps, arc.head, rules);
    if (verb < 0) continue;
    if (doc.in_quoted_span(TokenSpan{verb, verb})) continue;
    out.push_back(verb);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<VerbEdit> make_verb_edits(const Document& doc, const std::vector<int>& verb_tokens,
                                      const VerbDictionary& dict) {
  std::vector<VerbEdit> out;
  for (int idx : verb_tokens) {
    const Token& t = doc.tokens[idx];
    ConjugationResult r =
        conjugate_third_singular(t.surface, t.lemma, tense_from_pos(t.pos), dict);
    if (r.form == t.surface) continue;
    VerbEdit e;
    e.token = idx;
    e.char_start = t.char_start;
    e.char_end = t.char_end;
    e.old_text = t.surface;
    e.new_text = r.form;
    e.rule = r.rule;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace povshift
