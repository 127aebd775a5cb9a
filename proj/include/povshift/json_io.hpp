#pragma once

#include <string>
#include <vector>

#include "povshift/core.hpp"

namespace povshift {

// One replacement applied to a mention slot. Char offsets index source_text.
struct MentionEdit {
  int chain_id = 0;
  int mention_index = 0;
  TokenSpan span;
  int char_start = 0;
  int char_end = 0;
  std::string old_text;
  std::string new_text;   // as rendered (sentence-initial capitalization applied)
  std::string selected;   // raw selected candidate string
  std::string note;       // provenance: "scored", "forced_singleton", "narrow_fallback", ...
  bool operator==(const MentionEdit&) const = default;
};

struct VerbEdit {
  int token = 0;
  int char_start = 0;
  int char_end = 0;
  std::string old_text;
  std::string new_text;
  std::string rule;  // dictionary | irregular | suffix_es | suffix_ies | suffix_s | contraction | unchanged
  bool operator==(const VerbEdit&) const = default;
};

struct ConversionResult {
  std::string doc_id;
  std::vector<MentionEdit> mention_edits;  // document order, unchanged slots included
  std::vector<VerbEdit> verb_edits;        // only actual changes
  std::string text;                        // rendered converted text
  // Run statistics, not serialized.
  int unk_substitutions = 0;
  int forced_singletons = 0;
  int narrow_fallbacks = 0;
  int skipped_slots = 0;
};

inline constexpr int kDocumentSchemaVersion = 1;

// Benchmark JSON document IO. Parsing validates structure and reports the
// offending JSON path in the exception message.
LoadedDocument parse_document_json(const std::string& json_text);
LoadedDocument load_document_json(const std::string& path);
std::string document_to_json(const LoadedDocument& loaded);

std::string conversion_to_json(const ConversionResult& res);
ConversionResult parse_conversion_json(const std::string& json_text);

// Builds the gold ConversionResult implied by a document's gold annotations.
ConversionResult gold_conversion(const LoadedDocument& loaded);

// Applies edits to the original text. Edits must not overlap.
std::string render_edits(const Document& doc, const std::vector<MentionEdit>& mention_edits,
                         const std::vector<VerbEdit>& verb_edits);

// True when the mention (or token) starts its sentence; such replacements are
// capitalized at render time.
std::string apply_capitalization(const Document& doc, const TokenSpan& span,
                                 const std::string& replacement);

}  // namespace povshift
