#include "povshift/windows.hpp"

#include <algorithm>

#include "povshift/lexicon.hpp"
#include "povshift/util.hpp"

namespace povshift {

WorkingText::WorkingText(const Document& doc, const std::vector<VerbEdit>& verb_edits) {
  cells_.resize(doc.tokens.size());
  for (size_t i = 0; i < doc.tokens.size(); ++i) cells_[i] = {doc.tokens[i].surface};
  for (const VerbEdit& e : verb_edits)
    if (e.token >= 0 && e.token < static_cast<int>(cells_.size())) cells_[e.token] = {e.new_text};
}

void WorkingText::replace_span(const TokenSpan& span, const std::string& text) {
  if (span.start < 0 || span.end >= static_cast<int>(cells_.size())) return;
  cells_[span.start] = split_ws(text);
  for (int i = span.start + 1; i <= span.end; ++i) cells_[i].clear();
}

std::string WorkingText::span_text(const TokenSpan& span) const {
  std::vector<std::string> parts;
  for (int i = std::max(span.start, 0);
       i <= span.end && i < static_cast<int>(cells_.size()); ++i)
    parts.insert(parts.end(), cells_[i].begin(), cells_[i].end());
  return join(parts, " ");
}

std::vector<std::string> WorkingText::tokens_left_of(int pos, int n) const {
  std::vector<std::string> rev;
  for (int i = std::min(pos, static_cast<int>(cells_.size())) - 1;
       i >= 0 && static_cast<int>(rev.size()) < n; --i)
    for (auto it = cells_[i].rbegin(); it != cells_[i].rend() && static_cast<int>(rev.size()) < n;
         ++it)
      rev.push_back(*it);
  std::vector<std::string> out(n - rev.size(), kPadToken);
  out.insert(out.end(), rev.rbegin(), rev.rend());
  return out;
}

std::vector<std::string> WorkingText::tokens_right_of(int pos, int n,
                                                      const std::vector<TokenSpan>& collapse,
                                                      int* unk_count) const {
  std::vector<std::string> out;
  int i = pos + 1;
  while (i < static_cast<int>(cells_.size()) && static_cast<int>(out.size()) < n) {
    const TokenSpan* hit = nullptr;
    for (const TokenSpan& s : collapse)
      if (s.start == i) hit = &s;
    if (hit) {
      out.push_back(kUnkToken);
      if (unk_count) ++*unk_count;
      i = hit->end + 1;
      continue;
    }
    for (const std::string& tok : cells_[i]) {
      if (static_cast<int>(out.size()) >= n) break;
      out.push_back(tok);
    }
    ++i;
  }
  out.resize(n, kPadToken);
  return out;
}

MentionWalker::MentionWalker(const Document& doc, const ConversionPlan& plan,
                             const std::vector<VerbEdit>& verb_edits, WindowConfig cfg)
    : doc_(doc), plan_(plan), verb_edits_(verb_edits), cfg_(cfg) {
  std::map<std::pair<int, int>, int> slot_of;  // (chain id, mention index) -> slot
  for (size_t i = 0; i < plan.slots.size(); ++i)
    slot_of[{plan.slots[i].chain_id, plan.slots[i].mention_index}] = static_cast<int>(i);
  for (int chain_id : plan.context_chains) {
    const CorefChain* chain = doc.chain_by_id(chain_id);
    if (!chain) continue;
    for (size_t mi = 0; mi < chain->mentions.size(); ++mi) {
      ContextMention cm;
      cm.chain_id = chain_id;
      cm.span = chain->mentions[mi].span;
      auto it = slot_of.find({chain_id, static_cast<int>(mi)});
      if (it != slot_of.end()) cm.slot = it->second;
      context_.push_back(cm);
    }
  }
  std::stable_sort(context_.begin(), context_.end(),
                   [](const ContextMention& a, const ContextMention& b) {
                     return a.span.start != b.span.start ? a.span.start < b.span.start
                                                         : a.span.end < b.span.end;
                   });
}

std::vector<std::string> MentionWalker::walk(const Visitor& visit) { return run(visit, nullptr); }

std::vector<std::string> MentionWalker::walk_resolved(const std::vector<std::string>& selections,
                                                      const Visitor& visit) {
  return run(visit, &selections);
}

std::vector<std::string> MentionWalker::run(const Visitor& visit,
                                            const std::vector<std::string>* preset) {
  WorkingText text(doc_, verb_edits_);
  unk_substitutions_ = 0;
  const auto& slots = plan_.slots;
  std::vector<bool> resolved(slots.size(), false);
  std::vector<std::string> choices(slots.size());
  for (size_t i = 0; i < slots.size(); ++i) {
    choices[i] = slots[i].original;
    if (slots[i].skip) resolved[i] = true;
  }
  if (preset) {
    for (size_t i = 0; i < slots.size(); ++i) {
      resolved[i] = true;
      if (slots[i].skip) continue;
      std::string s = i < preset->size() ? (*preset)[i] : std::string();
      if (s.empty()) s = slots[i].gold.empty() ? slots[i].original : slots[i].gold;
      text.replace_span(slots[i].span, s);
      choices[i] = s;
    }
  }

  static const std::vector<Candidate> no_candidates;
  for (size_t i = 0; i < slots.size(); ++i) {
    const MentionSlot& slot = slots[i];
    if (slot.skip) continue;
    SlotView view;
    view.slot_index = i;
    view.slot = &slot;
    auto it = plan_.candidates.find(slot.chain_id);
    view.candidates = it != plan_.candidates.end() ? &it->second : &no_candidates;
    view.windows = build_windows(text, i, resolved);
    for (size_t j = 0; j < i; ++j)
      if (slots[j].chain_id == slot.chain_id) view.prior_strings.push_back(choices[j]);
    if (!view.prior_strings.empty()) view.previous_string = view.prior_strings.back();
    std::string chosen = visit(view);
    if (chosen.empty()) chosen = slot.original;
    choices[i] = chosen;
    if (!preset) {
      text.replace_span(slot.span, chosen);
      resolved[i] = true;
    }
  }
  return choices;
}

ContextWindows MentionWalker::build_windows(const WorkingText& text, size_t slot_index,
                                            const std::vector<bool>& resolved) {
  const MentionSlot& slot = plan_.slots[slot_index];
  ContextWindows w;
  w.left_tokens = text.tokens_left_of(slot.span.start, cfg_.n_tokens);

  std::vector<TokenSpan> collapse;
  for (size_t j = 0; j < plan_.slots.size(); ++j)
    if (!resolved[j] && j != slot_index && plan_.slots[j].span.start > slot.span.end)
      collapse.push_back(plan_.slots[j].span);
  int unks = 0;
  w.right_tokens = text.tokens_right_of(slot.span.end, cfg_.n_tokens, collapse, &unks);
  unk_substitutions_ += unks;

  std::vector<const ContextMention*> left, right;
  for (const ContextMention& cm : context_) {
    if (cm.slot == static_cast<int>(slot_index)) continue;
    if (cm.chain_id == slot.chain_id && cm.span == slot.span) continue;
    if (cm.span.start < slot.span.start)
      left.push_back(&cm);
    else if (cm.span.start > slot.span.start)
      right.push_back(&cm);
  }

  auto make_group = [&](const ContextMention& cm, bool is_left) {
    MentionContext mc;
    mc.dist = is_left ? slot.span.start - cm.span.start : cm.span.start - slot.span.start;
    mc.own = cm.chain_id == slot.chain_id;
    mc.same_sentence = doc_.sentence_of(cm.span.start) == doc_.sentence_of(slot.span.start);
    mc.resolved = cm.slot < 0 || resolved[cm.slot];
    if (mc.resolved) {
      mc.tokens = split_ws(text.span_text(cm.span));
    } else {
      mc.tokens = {kUnkToken};
      ++unk_substitutions_;
    }
    return mc;
  };

  const int k = cfg_.k_mentions;
  MentionContext pad;
  pad.tokens = {kPadToken};
  pad.pad = true;

  int from = std::max(0, static_cast<int>(left.size()) - k);
  w.left_mentions.assign(std::max(0, k - static_cast<int>(left.size())), pad);
  for (size_t j = from; j < left.size(); ++j) w.left_mentions.push_back(make_group(*left[j], true));

  for (size_t j = 0; j < right.size() && static_cast<int>(j) < k; ++j)
    w.right_mentions.push_back(make_group(*right[j], false));
  while (static_cast<int>(w.right_mentions.size()) < k) w.right_mentions.push_back(pad);
  return w;
}

}  // namespace povshift
