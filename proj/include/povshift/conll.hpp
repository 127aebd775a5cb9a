#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "povshift/core.hpp"
#include "povshift/preprocess.hpp"

namespace povshift {

struct ConllParseError : std::runtime_error {
  explicit ConllParseError(const std::string& what) : std::runtime_error(what) {}
};

// One coreference document assembled from the *_conll column format, with the
// named-entity spans read from the NE column. Parts of the same document are
// concatenated; chain ids from part p are offset by p * 1000.
struct ConllDocument {
  Document doc;
  std::vector<NerSpan> ne_spans;
};

// Parses every `#begin document` block in the text. `name` labels parse
// errors (file name or a description of the stream).
std::vector<ConllDocument> parse_conll(const std::string& text, const std::string& name = "");
std::vector<ConllDocument> load_conll_file(const std::string& path);

// Re-emits a document in the same column layout (one part). Parsing the
// result reproduces the coreference chains exactly.
std::string emit_conll(const ConllDocument& doc);

// Documents with no first- or second-person pronoun token outside quotation
// marks. Idempotent.
std::vector<Document> filter_deictic_documents(const std::vector<Document>& corpus);

// Ids of chains that refer to persons and are written in the third person.
std::vector<int> select_person_chains(const Document& doc);

struct CorpusStats {
  long entities = 0;
  long mentions = 0;
  double mentions_per_entity = 0.0;
  long documents = 0;
  long words = 0;
};

// Counts over the person chains returned by select_person_chains.
CorpusStats corpus_stats(const std::vector<Document>& corpus);

std::string stats_csv_header();
std::string stats_csv_row(const std::string& dataset, const CorpusStats& stats);

}  // namespace povshift
