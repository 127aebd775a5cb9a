#include "povshift/core.hpp"

#include <sstream>

#include "povshift/util.hpp"

namespace povshift {

std::string to_string(GrammaticalRole r) {
  switch (r) {
    case GrammaticalRole::subject: return "subject";
    case GrammaticalRole::object: return "object";
    case GrammaticalRole::other: return "other";
  }
  return "other";
}

std::optional<GrammaticalRole> role_from_string(const std::string& s) {
  if (s == "subject") return GrammaticalRole::subject;
  if (s == "object") return GrammaticalRole::object;
  if (s == "other") return GrammaticalRole::other;
  return std::nullopt;
}

std::string to_string(EntityKind k) {
  return k == EntityKind::person ? "person" : "other";
}

const CorefChain* Document::chain_by_id(int id) const {
  for (const CorefChain& c : chains)
    if (c.id == id) return &c;
  return nullptr;
}

int Document::sentence_of(int token_idx) const {
  for (size_t i = 0; i < sentences.size(); ++i)
    if (sentences[i].contains(token_idx)) return static_cast<int>(i);
  return -1;
}

bool Document::in_quoted_span(const TokenSpan& span) const {
  for (const TokenSpan& q : quoted_spans)
    if (q.overlaps(span)) return true;
  return false;
}

std::string Document::span_text(const TokenSpan& span) const {
  std::string out;
  for (int i = span.start; i <= span.end && i < static_cast<int>(tokens.size()); ++i) {
    if (i > span.start) out += ' ';
    out += tokens[i].surface;
  }
  return out;
}

namespace {

void check_span_list(const std::vector<TokenSpan>& spans, int n_tokens, const std::string& what,
                     std::vector<std::string>& out) {
  for (size_t i = 0; i < spans.size(); ++i) {
    const TokenSpan& s = spans[i];
    std::ostringstream os;
    os << what << "[" << i << "]";
    if (s.start < 0 || s.end >= n_tokens || s.start > s.end) {
      out.push_back(os.str() + ": invalid token range [" + std::to_string(s.start) + "," +
                    std::to_string(s.end) + "]");
      continue;
    }
    if (i > 0 && spans[i - 1].end >= s.start)
      out.push_back(os.str() + ": overlaps or is out of order with previous span");
  }
}

}  // namespace

std::vector<std::string> validate_document(const Document& doc) {
  std::vector<std::string> v;
  const int n = static_cast<int>(doc.tokens.size());
  const int text_len = static_cast<int>(doc.source_text.size());

  for (int i = 0; i < n; ++i) {
    const Token& t = doc.tokens[i];
    std::string at = "tokens[" + std::to_string(i) + "]";
    if (t.surface.empty()) v.push_back(at + ": empty surface");
    if (t.char_start < 0 || t.char_end > text_len || t.char_start >= t.char_end)
      v.push_back(at + ": char span [" + std::to_string(t.char_start) + "," +
                  std::to_string(t.char_end) + ") outside text of length " +
                  std::to_string(text_len));
    else if (!t.surface.empty() &&
             doc.source_text.compare(t.char_start, t.char_end - t.char_start, t.surface) != 0)
      v.push_back(at + ": surface does not match source_text slice");
    if (i > 0 && t.char_start < doc.tokens[i - 1].char_end)
      v.push_back(at + ": char span overlaps previous token");
  }

  check_span_list(doc.sentences, n, "sentences", v);
  check_span_list(doc.quoted_spans, n, "quoted_spans", v);

  // Every token must lie inside exactly one sentence.
  if (!doc.sentences.empty()) {
    std::vector<int> covered(n, 0);
    for (const TokenSpan& s : doc.sentences)
      if (s.start >= 0 && s.end < n && s.start <= s.end)
        for (int i = s.start; i <= s.end; ++i) ++covered[i];
    for (int i = 0; i < n; ++i)
      if (covered[i] != 1)
        v.push_back("tokens[" + std::to_string(i) + "]: covered by " +
                    std::to_string(covered[i]) + " sentences");
  }

  std::vector<int> seen_ids;
  for (size_t ci = 0; ci < doc.chains.size(); ++ci) {
    const CorefChain& c = doc.chains[ci];
    std::string at = "chains[" + std::to_string(ci) + "]";
    for (int id : seen_ids)
      if (id == c.id) v.push_back(at + ": duplicate chain id " + std::to_string(c.id));
    seen_ids.push_back(c.id);
    if (c.mentions.empty()) v.push_back(at + ": chain has no mentions");
    for (size_t mi = 0; mi < c.mentions.size(); ++mi) {
      const Mention& m = c.mentions[mi];
      std::string mat = at + ".mentions[" + std::to_string(mi) + "]";
      if (m.span.start < 0 || m.span.end >= n || m.span.start > m.span.end) {
        v.push_back(mat + ": invalid token span");
        continue;
      }
      if (mi > 0 && c.mentions[mi - 1].span.start > m.span.start)
        v.push_back(mat + ": mentions not in document order");
      if (doc.sentence_of(m.span.start) != doc.sentence_of(m.span.end) ||
          doc.sentence_of(m.span.start) < 0)
        v.push_back(mat + ": span crosses a sentence boundary");
      if (m.text != doc.span_text(m.span))
        v.push_back(mat + ": text does not match token surfaces");
      bool pronoun = is_pronoun(m.text);
      if (pronoun == (m.case_class == CaseClass::non_pronominal))
        v.push_back(mat + ": case class inconsistent with pronoun inventory");
      if (m.in_quote != doc.in_quoted_span(m.span))
        v.push_back(mat + ": in_quote flag inconsistent with quoted_spans");
    }
    Person inferred = infer_chain_pov(doc, c);
    if (c.pov != inferred)
      v.push_back(at + ": pov " + to_string(c.pov) + " but mention evidence says " +
                  to_string(inferred));
  }
  return v;
}

Person infer_chain_pov(const Document& doc, const CorefChain& chain) {
  (void)doc;
  for (const Mention& m : chain.mentions) {
    if (m.in_quote) continue;
    if (is_deictic_pronoun(m.text, Person::first)) return Person::first;
    if (is_deictic_pronoun(m.text, Person::second)) return Person::second;
  }
  return Person::third;
}

Number infer_chain_number(const CorefChain& chain) {
  for (const Mention& m : chain.mentions)
    if (is_plural_pronoun(m.text)) return Number::plural;
  return Number::singular;
}

Gender infer_chain_gender(const CorefChain& chain) {
  bool masc = false, fem = false;
  for (const Mention& m : chain.mentions) {
    const PronounInfo* info = lookup_pronoun(lowercase(m.text));
    if (info && info->gender == Gender::masculine) masc = true;
    if (info && info->gender == Gender::feminine) fem = true;
    if (m.span.length() == 1) {
      Gender g = kinship_noun_gender(lowercase(m.text));
      if (g == Gender::masculine) masc = true;
      if (g == Gender::feminine) fem = true;
    }
  }
  if (masc && !fem) return Gender::masculine;
  if (fem && !masc) return Gender::feminine;
  return Gender::unknown;
}

}  // namespace povshift
