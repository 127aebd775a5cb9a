#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "povshift/candidates.hpp"
#include "povshift/core.hpp"
#include "povshift/json_io.hpp"

namespace povshift {

struct WindowConfig {
  int n_tokens = 50;   // token window width on each side
  int k_mentions = 10; // mention groups on each side
};

// One rewritable mention position within a conversion.
struct MentionSlot {
  int chain_id = -1;
  int mention_index = 0;  // position of the mention within its chain
  TokenSpan span;
  std::string original;
  std::string pos;        // part of speech of the mention's head token
  CaseClass original_case = CaseClass::non_pronominal;
  GrammaticalRole role = GrammaticalRole::other;
  bool skip = false;      // inside quotation marks or a narrator aside
  bool is_focus = false;
  std::string gold;       // target string when supervision is available
};

struct ConversionPlan {
  int focus_chain = -1;
  std::vector<MentionSlot> slots;                    // document order
  std::map<int, std::vector<Candidate>> candidates;  // chain id -> candidate set
  std::vector<int> context_chains;                   // chains shown in mention windows
};

// The document text as it evolves during a conversion. Each original token
// owns a cell whose contents are the current surface tokens at that position.
class WorkingText {
 public:
  WorkingText(const Document& doc, const std::vector<VerbEdit>& verb_edits);

  void replace_span(const TokenSpan& span, const std::string& text);
  const std::vector<std::string>& cell(int i) const { return cells_[i]; }
  std::string span_text(const TokenSpan& span) const;

  // Up to n tokens before `pos`, oldest first, left-padded to exactly n.
  std::vector<std::string> tokens_left_of(int pos, int n) const;
  // Up to n tokens after `pos`, nearest first, right-padded to exactly n.
  // Spans in `collapse` each contribute a single "<unk>" token. Increments
  // *unk_count per collapse that lands inside the window.
  std::vector<std::string> tokens_right_of(int pos, int n, const std::vector<TokenSpan>& collapse,
                                           int* unk_count = nullptr) const;

 private:
  std::vector<std::vector<std::string>> cells_;
};

// One mention group in a mention window.
struct MentionContext {
  std::vector<std::string> tokens;  // current tokens, {"<unk>"} if unresolved, {"<pad>"} if padding
  bool own = false;                 // same entity as the current slot
  int dist = 0;                     // start-to-start distance in original token indices
  bool resolved = true;
  bool same_sentence = false;       // shares a sentence with the current slot
  bool pad = false;
};

struct ContextWindows {
  std::vector<std::string> left_tokens;        // exactly n, oldest first
  std::vector<std::string> right_tokens;       // exactly n, nearest first
  std::vector<MentionContext> left_mentions;   // exactly k, oldest first
  std::vector<MentionContext> right_mentions;  // exactly k, nearest first
};

// Walks the plan's slots in document order, maintaining the working text.
// The visitor sees the slot with its context windows and returns the chosen
// string, which is written into the working text before the next slot.
class MentionWalker {
 public:
  struct SlotView {
    size_t slot_index = 0;
    const MentionSlot* slot = nullptr;
    const std::vector<Candidate>* candidates = nullptr;
    ContextWindows windows;
    std::vector<std::string> prior_strings;  // strings of the chain's earlier mentions
    std::string previous_string;             // string of the immediately preceding mention
  };
  using Visitor = std::function<std::string(const SlotView&)>;

  MentionWalker(const Document& doc, const ConversionPlan& plan,
                const std::vector<VerbEdit>& verb_edits, WindowConfig cfg);

  // Autoregressive pass: slots after the current one count as unresolved.
  std::vector<std::string> walk(const Visitor& visit);
  // Every slot's selection is applied up front, so no window contains
  // "<unk>". Selections align with plan.slots; empty strings fall back to the
  // slot's gold, then to its original text.
  std::vector<std::string> walk_resolved(const std::vector<std::string>& selections,
                                         const Visitor& visit);

  int unk_substitutions() const { return unk_substitutions_; }

 private:
  struct ContextMention {
    int chain_id = -1;
    TokenSpan span;
    int slot = -1;  // plan slot index, -1 for mentions outside the plan
  };

  std::vector<std::string> run(const Visitor& visit, const std::vector<std::string>* preset);
  ContextWindows build_windows(const WorkingText& text, size_t slot_index,
                               const std::vector<bool>& resolved);

  const Document& doc_;
  const ConversionPlan& plan_;
  std::vector<VerbEdit> verb_edits_;
  WindowConfig cfg_;
  std::vector<ContextMention> context_;  // document order
  int unk_substitutions_ = 0;
};

}  // namespace povshift
