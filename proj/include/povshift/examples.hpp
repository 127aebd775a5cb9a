#pragma once

#include <string>
#include <vector>

#include "povshift/candidates.hpp"
#include "povshift/windows.hpp"

namespace povshift {

// One mention group of a context window, as stored in training data.
struct ExampleMention {
  std::vector<std::string> tokens;
  bool own = false;
  int dist = 0;
  bool resolved = true;
  bool same_sentence = false;
  bool operator==(const ExampleMention&) const = default;
};

// Everything a scorer needs to rank the candidate strings for one mention
// position: the candidate set, the token and mention windows around the
// position, and the selection history of the owning chain.
struct RankingExample {
  std::string doc_id;
  int chain_id = -1;
  int mention_index = 0;
  std::string gold;
  std::string original;
  std::string original_pos;  // part of speech of the original mention's head token
  CaseClass original_case = CaseClass::non_pronominal;
  GrammaticalRole role = GrammaticalRole::other;
  std::vector<Candidate> candidates;  // canonical order
  std::vector<std::string> prior_strings;
  std::string previous_string;
  std::vector<std::string> left_tokens;          // oldest first
  std::vector<std::string> right_tokens;         // nearest first
  std::vector<ExampleMention> left_mentions;     // oldest first
  std::vector<ExampleMention> right_mentions;    // nearest first
  bool operator==(const RankingExample&) const = default;
};

ExampleMention to_example_mention(const MentionContext& mc);

// Snapshot of a walker slot view, with the gold target when known.
RankingExample example_from_view(const std::string& doc_id, const MentionWalker::SlotView& view,
                                 const std::string& gold);

// One example per out-of-quote mention of the chain. Candidates are the
// unique strings over the chain's out-of-quote mentions (deictic pronouns
// excluded). Earlier mentions keep their observed strings in the left
// context; later mentions of the same chain appear as "<unk>" on the right.
std::vector<RankingExample> extract_chain_examples(const Document& doc, int chain_id,
                                                   const WindowConfig& cfg);

// extract_chain_examples over every third-person person chain.
std::vector<RankingExample> extract_document_examples(const Document& doc,
                                                      const WindowConfig& cfg);

// JSONL serialization, one example per line, keys sorted.
std::string examples_to_jsonl(const std::vector<RankingExample>& examples);
std::vector<RankingExample> parse_examples_jsonl(const std::string& text);
std::vector<RankingExample> load_examples_jsonl(const std::string& path);
void write_examples_jsonl(const std::string& path, const std::vector<RankingExample>& examples);

}  // namespace povshift
