#include "povshift/conll.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "povshift/candidates.hpp"
#include "povshift/lexicon.hpp"
#include "povshift/util.hpp"

namespace povshift {

namespace {

struct RawToken {
  std::string word;
  std::string pos;
  std::string lemma;
  std::string ne;
  std::string coref;
};

struct DocBuilder {
  std::string doc_id;
  std::vector<RawToken> tokens;
  std::vector<TokenSpan> sentences;
  std::map<int, std::vector<Mention>> chains;
  std::vector<NerSpan> ne_spans;
  std::map<int, std::vector<int>> open_mentions;  // chain id -> stack of start indices
  int open_ne_start = -1;
  std::string open_ne_label;
  int sent_start = 0;

  void end_sentence(const std::string& where) {
    int n = static_cast<int>(tokens.size());
    if (n > sent_start) {
      sentences.push_back(TokenSpan{sent_start, n - 1});
      sent_start = n;
    }
    if (open_ne_start >= 0) {
      ne_spans.push_back(NerSpan{TokenSpan{open_ne_start, n - 1}, open_ne_label});
      open_ne_start = -1;
    }
    for (const auto& [id, stack] : open_mentions)
      if (!stack.empty())
        throw ConllParseError(where + ": unbalanced coreference bracket for chain " +
                              std::to_string(id));
  }
};

void parse_coref_column(const std::string& col, int token_idx, int chain_offset, DocBuilder& b,
                        const std::string& where) {
  if (col == "-" || col == "_" || col == "*") return;
  for (const std::string& part : split_char(col, '|')) {
    if (part.empty()) continue;
    bool opens = part.front() == '(';
    bool closes = part.back() == ')';
    std::string digits = part.substr(opens ? 1 : 0, part.size() - (opens ? 1 : 0) - (closes ? 1 : 0));
    int id = 0;
    try {
      id = chain_offset + std::stoi(digits);
    } catch (const std::exception&) {
      throw ConllParseError(where + ": bad coreference field '" + part + "'");
    }
    if (opens) b.open_mentions[id].push_back(token_idx);
    if (closes) {
      auto& stack = b.open_mentions[id];
      if (stack.empty())
        throw ConllParseError(where + ": unbalanced coreference bracket for chain " +
                              std::to_string(id));
      int start = stack.back();
      stack.pop_back();
      Mention m;
      m.span = TokenSpan{start, token_idx};
      b.chains[id].push_back(m);
    }
  }
}

void parse_ne_column(const std::string& col, int token_idx, DocBuilder& b) {
  if (col.empty() || col == "-") return;
  std::string s = col;
  if (s.front() == '(') {
    size_t end = s.find_first_of("*)");
    b.open_ne_label = s.substr(1, end == std::string::npos ? std::string::npos : end - 1);
    b.open_ne_start = token_idx;
  }
  if (s.back() == ')' && b.open_ne_start >= 0) {
    b.ne_spans.push_back(NerSpan{TokenSpan{b.open_ne_start, token_idx}, b.open_ne_label});
    b.open_ne_start = -1;
  }
}

ConllDocument finish_document(DocBuilder& b) {
  ConllDocument out;
  Document& doc = out.doc;
  doc.doc_id = b.doc_id;
  size_t slash = b.doc_id.find('/');
  if (slash != std::string::npos) doc.genre = b.doc_id.substr(0, slash);

  std::string text;
  for (size_t i = 0; i < b.tokens.size(); ++i) {
    const RawToken& rt = b.tokens[i];
    if (i > 0) text += ' ';
    Token t;
    t.surface = rt.word;
    t.pos = rt.pos;
    t.lemma = rt.lemma == "-" ? lowercase(rt.word) : rt.lemma;
    t.char_start = static_cast<int>(text.size());
    text += rt.word;
    t.char_end = static_cast<int>(text.size());
    doc.tokens.push_back(std::move(t));
  }
  doc.source_text = std::move(text);
  doc.sentences = b.sentences;
  doc.quoted_spans = detect_quoted_spans(doc.tokens, doc.sentences);
  out.ne_spans = b.ne_spans;

  for (auto& [id, mentions] : b.chains) {
    CorefChain chain;
    chain.id = id;
    std::stable_sort(mentions.begin(), mentions.end(),
                     [](const Mention& a, const Mention& b2) {
                       return a.span.start != b2.span.start ? a.span.start < b2.span.start
                                                            : a.span.end < b2.span.end;
                     });
    bool person = false;
    for (Mention& m : mentions) {
      m.text = doc.span_text(m.span);
      m.in_quote = doc.in_quoted_span(m.span);
      m.case_class = mention_case(doc, m.span, m.role);
      if (is_human_pronoun(m.text)) person = true;
      for (const NerSpan& s : out.ne_spans)
        if (s.label == "PERSON" && s.span.overlaps(m.span)) person = true;
    }
    chain.mentions = std::move(mentions);
    chain.kind = person ? EntityKind::person : EntityKind::other;
    chain.pov = infer_chain_pov(doc, chain);
    chain.number = infer_chain_number(chain);
    chain.gender = infer_chain_gender(chain);
    doc.chains.push_back(std::move(chain));
  }
  return out;
}

}  // namespace

std::vector<ConllDocument> parse_conll(const std::string& text, const std::string& name) {
  std::vector<ConllDocument> out;
  // Parts of the same document arrive in sequence and are merged.
  DocBuilder* builder = nullptr;
  std::vector<std::pair<std::string, DocBuilder>> builders;
  int chain_offset = 0;

  std::vector<std::string> lines = split_char(text, '\n');
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::string where = (name.empty() ? std::string("conll") : name) + ":" + std::to_string(ln + 1);
    std::string line = lines[ln];
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();

    if (starts_with(line, "#begin document")) {
      size_t open = line.find('(');
      size_t close = line.find(')');
      if (open == std::string::npos || close == std::string::npos || close < open)
        throw ConllParseError(where + ": malformed #begin document line");
      std::string doc_id = line.substr(open + 1, close - open - 1);
      int part = 0;
      size_t part_pos = line.find("part", close);
      if (part_pos != std::string::npos) part = std::atoi(line.c_str() + part_pos + 4);
      builder = nullptr;
      for (auto& [id, b] : builders)
        if (id == doc_id) builder = &b;
      if (!builder) {
        builders.emplace_back(doc_id, DocBuilder{});
        builder = &builders.back().second;
        builder->doc_id = doc_id;
      }
      chain_offset = part * 1000;
      continue;
    }
    if (starts_with(line, "#end document")) {
      if (builder) builder->end_sentence(where);
      builder = nullptr;
      continue;
    }
    if (line.empty() || line[0] == '#') {
      if (builder && !line.empty()) continue;
      if (builder) builder->end_sentence(where);
      continue;
    }
    if (!builder) throw ConllParseError(where + ": token line outside a document block");

    std::vector<std::string> cols = split_ws(line);
    if (cols.size() < 12)
      throw ConllParseError(where + ": expected at least 12 columns, found " +
                            std::to_string(cols.size()));
    RawToken rt;
    rt.word = cols[3];
    rt.pos = cols[4];
    rt.lemma = cols[6];
    rt.ne = cols[10];
    rt.coref = cols.back();
    int token_idx = static_cast<int>(builder->tokens.size());
    builder->tokens.push_back(rt);
    parse_ne_column(rt.ne, token_idx, *builder);
    parse_coref_column(rt.coref, token_idx, chain_offset, *builder, where);
  }

  for (auto& [id, b] : builders) out.push_back(finish_document(b));
  return out;
}

std::vector<ConllDocument> load_conll_file(const std::string& path) {
  return parse_conll(read_file(path), path);
}

std::string emit_conll(const ConllDocument& cd) {
  const Document& doc = cd.doc;
  std::ostringstream os;
  os << "#begin document (" << doc.doc_id << "); part 000\n";
  for (size_t si = 0; si < doc.sentences.size(); ++si) {
    const TokenSpan& sent = doc.sentences[si];
    for (int t = sent.start; t <= sent.end; ++t) {
      const Token& tok = doc.tokens[t];
      std::string ne = "*";
      for (const NerSpan& s : cd.ne_spans) {
        if (s.span.start == t && s.span.end == t)
          ne = "(" + s.label + ")";
        else if (s.span.start == t)
          ne = "(" + s.label + "*";
        else if (s.span.end == t)
          ne = "*)";
      }
      std::vector<std::string> coref;
      for (const CorefChain& c : doc.chains) {
        for (const Mention& m : c.mentions) {
          if (m.span.start == t && m.span.end == t)
            coref.push_back("(" + std::to_string(c.id) + ")");
          else if (m.span.start == t)
            coref.push_back("(" + std::to_string(c.id));
          else if (m.span.end == t)
            coref.push_back(std::to_string(c.id) + ")");
        }
      }
      os << doc.doc_id << " 0 " << (t - sent.start) << ' ' << tok.surface << ' ' << tok.pos
         << " - " << (tok.lemma.empty() ? "-" : tok.lemma) << " - - - " << ne << ' '
         << (coref.empty() ? "-" : join(coref, "|")) << '\n';
    }
    os << '\n';
  }
  os << "#end document\n";
  return os.str();
}

std::vector<Document> filter_deictic_documents(const std::vector<Document>& corpus) {
  std::vector<Document> out;
  for (const Document& doc : corpus) {
    bool deictic = false;
    for (size_t i = 0; i < doc.tokens.size() && !deictic; ++i) {
      if (!is_first_or_second_pronoun(doc.tokens[i].surface)) continue;
      TokenSpan span{static_cast<int>(i), static_cast<int>(i)};
      if (!doc.in_quoted_span(span)) deictic = true;
    }
    if (!deictic) out.push_back(doc);
  }
  return out;
}

std::vector<int> select_person_chains(const Document& doc) {
  std::vector<int> ids;
  for (const CorefChain& c : doc.chains)
    if (c.kind == EntityKind::person && c.pov == Person::third) ids.push_back(c.id);
  return ids;
}

CorpusStats corpus_stats(const std::vector<Document>& corpus) {
  CorpusStats s;
  for (const Document& doc : corpus) {
    ++s.documents;
    s.words += static_cast<long>(doc.tokens.size());
    for (int id : select_person_chains(doc)) {
      ++s.entities;
      s.mentions += static_cast<long>(doc.chain_by_id(id)->mentions.size());
    }
  }
  s.mentions_per_entity = s.entities > 0 ? static_cast<double>(s.mentions) / s.entities : 0.0;
  return s;
}

std::string stats_csv_header() { return "dataset,entities,mentions,men_per_ent,docs,words\n"; }

std::string stats_csv_row(const std::string& dataset, const CorpusStats& stats) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", stats.mentions_per_entity);
  std::ostringstream os;
  os << dataset << ',' << stats.entities << ',' << stats.mentions << ',' << buf << ','
     << stats.documents << ',' << stats.words;
  return os.str();
}

}  // namespace povshift
