#include "povshift/select.hpp"

#include <algorithm>
#include <stdexcept>

#include "povshift/json_io.hpp"
#include "povshift/nn.hpp"
#include "povshift/util.hpp"

namespace povshift {

PreparedConversion prepare_conversion(const LoadedDocument& loaded, const PipelineConfig& cfg) {
  PreparedConversion prep;
  prep.doc = loaded.doc;
  prep.deps = loaded.deps;
  prep.windows = cfg.windows;
  Document& doc = prep.doc;

  prep.focus_chain = identify_focus_chain(doc, cfg.spec);
  const CorefChain* focus = doc.chain_by_id(prep.focus_chain);

  detect_narrator_mentions(doc, prep.deps, cfg.performatives, cfg.rules);

  std::vector<int> verbs = find_agreement_verbs(doc, prep.deps, *focus, cfg.rules);
  prep.verb_edits = make_verb_edits(doc, verbs, cfg.verbs);

  prep.focus_gender = cfg.spec.gender != Gender::unknown ? cfg.spec.gender : focus->gender;
  if (prep.focus_gender == Gender::unknown)
    throw std::invalid_argument("focus entity gender is unknown; set it explicitly");

  prep.confounders = identify_confounders(doc, prep.focus_chain, prep.focus_gender,
                                          cfg.spec.from_pov);

  EntitySpec spec = cfg.spec;
  spec.gender = prep.focus_gender;
  prep.plan.focus_chain = prep.focus_chain;
  prep.plan.candidates[prep.focus_chain] =
      build_focus_candidates(doc, prep.deps, *focus, spec, cfg.relational, cfg.rules);
  std::vector<int> plan_chains = {prep.focus_chain};
  for (int id : prep.confounders.singular) {
    prep.plan.candidates[id] =
        build_confounder_candidates(*doc.chain_by_id(id), prep.focus_gender);
    plan_chains.push_back(id);
  }
  for (int id : prep.confounders.plural_deictic) {
    prep.plan.candidates[id] =
        build_confounder_candidates(*doc.chain_by_id(id), prep.focus_gender);
    plan_chains.push_back(id);
  }

  for (const CorefChain& c : doc.chains)
    if (c.kind == EntityKind::person) prep.plan.context_chains.push_back(c.id);

  std::vector<MentionSlot> slots;
  for (int chain_id : plan_chains) {
    const CorefChain* chain = doc.chain_by_id(chain_id);
    const std::vector<std::string>* gold = nullptr;
    auto git = loaded.gold.replacements.find(chain_id);
    if (git != loaded.gold.replacements.end()) gold = &git->second;
    for (size_t mi = 0; mi < chain->mentions.size(); ++mi) {
      const Mention& m = chain->mentions[mi];
      MentionSlot s;
      s.chain_id = chain_id;
      s.mention_index = static_cast<int>(mi);
      s.span = m.span;
      s.original = m.text;
      if (m.span.end >= 0 && m.span.end < static_cast<int>(doc.tokens.size()))
        s.pos = doc.tokens[m.span.end].pos;
      s.original_case = m.case_class;
      s.role = m.role;
      s.skip = m.in_quote || m.narrator;
      s.is_focus = chain_id == prep.focus_chain;
      if (gold && mi < gold->size()) s.gold = (*gold)[mi];
      slots.push_back(std::move(s));
    }
  }
  std::stable_sort(slots.begin(), slots.end(), [](const MentionSlot& a, const MentionSlot& b) {
    return a.span.start != b.span.start ? a.span.start < b.span.start
                                        : a.span.length() > b.span.length();
  });
  for (const MentionSlot& s : slots) {
    bool nested = false;
    for (const MentionSlot& kept : prep.plan.slots)
      if (kept.span.contains(s.span) && !(kept.span == s.span && kept.chain_id == s.chain_id))
        nested = true;
    if (nested) {
      prep.warnings.push_back("mention '" + s.original + "' of chain " +
                              std::to_string(s.chain_id) +
                              " is nested inside another rewritable mention; left unchanged");
      continue;
    }
    prep.plan.slots.push_back(s);
  }
  return prep;
}

ConversionResult select_mentions(const PreparedConversion& prepared, MentionScorer& scorer) {
  const Document& doc = prepared.doc;
  ConversionResult res;
  res.doc_id = doc.doc_id;
  res.verb_edits = prepared.verb_edits;

  std::vector<std::string> notes(prepared.plan.slots.size(), "skipped");
  MentionWalker walker(doc, prepared.plan, prepared.verb_edits, prepared.windows);
  std::vector<std::string> choices = walker.walk([&](const MentionWalker::SlotView& view) {
    const MentionSlot& slot = *view.slot;
    std::vector<Candidate> pool = *view.candidates;
    bool fell_back = false;
    if (scorer.use_case_narrowing()) {
      pool = narrow_by_case(pool, slot.original_case, &fell_back);
      if (fell_back) ++res.narrow_fallbacks;
    }
    std::string note;
    std::string chosen;
    if (pool.empty()) {
      chosen = slot.original;
      note = "no_candidates";
    } else if (pool.size() == 1) {
      chosen = pool[0].text;
      note = "forced_singleton";
      ++res.forced_singletons;
    } else {
      RankingExample ex = example_from_view(doc.doc_id, view, slot.gold);
      std::vector<double> scores = scorer.score(ex, pool);
      if (scores.size() != pool.size())
        throw std::runtime_error("scorer '" + scorer.name() + "' returned " +
                                 std::to_string(scores.size()) + " scores for " +
                                 std::to_string(pool.size()) + " candidates");
      chosen = pool[stable_argmax(scores)].text;
      note = "scored";
    }
    if (fell_back) note = "narrow_fallback";
    notes[view.slot_index] = note;
    return chosen;
  });

  for (size_t i = 0; i < prepared.plan.slots.size(); ++i) {
    const MentionSlot& slot = prepared.plan.slots[i];
    MentionEdit me;
    me.chain_id = slot.chain_id;
    me.mention_index = slot.mention_index;
    me.span = slot.span;
    me.char_start = doc.tokens[slot.span.start].char_start;
    me.char_end = doc.tokens[slot.span.end].char_end;
    me.old_text = slot.original;
    me.selected = choices[i];
    me.new_text = slot.skip ? slot.original : apply_capitalization(doc, slot.span, choices[i]);
    me.note = notes[i];
    if (slot.skip) ++res.skipped_slots;
    res.mention_edits.push_back(std::move(me));
  }
  res.unk_substitutions = walker.unk_substitutions();
  res.text = render_edits(doc, res.mention_edits, res.verb_edits);
  return res;
}

ConversionResult convert_document(const LoadedDocument& loaded, const PipelineConfig& cfg,
                                  MentionScorer& scorer) {
  PreparedConversion prep = prepare_conversion(loaded, cfg);
  return select_mentions(prep, scorer);
}

std::vector<RankingExample> extract_conversion_examples(const LoadedDocument& loaded,
                                                        const PipelineConfig& cfg,
                                                        std::vector<std::string>* warnings) {
  PreparedConversion prep = prepare_conversion(loaded, cfg);
  if (warnings)
    warnings->insert(warnings->end(), prep.warnings.begin(), prep.warnings.end());

  for (MentionSlot& slot : prep.plan.slots) {
    if (slot.skip) continue;
    if (slot.gold.empty()) slot.gold = slot.original;
    std::vector<Candidate>& cands = prep.plan.candidates[slot.chain_id];
    bool found = false;
    for (const Candidate& c : cands)
      if (c.text == slot.gold) found = true;
    if (!found) {
      if (warnings)
        warnings->push_back("gold string '" + slot.gold + "' for chain " +
                            std::to_string(slot.chain_id) +
                            " is not in the candidate set; appended");
      cands.push_back(classify_string(slot.gold));
      canonicalize(cands);
    }
  }

  MentionWalker walker(prep.doc, prep.plan, prep.verb_edits, prep.windows);
  std::vector<RankingExample> out;
  walker.walk([&](const MentionWalker::SlotView& view) {
    out.push_back(example_from_view(prep.doc.doc_id, view, view.slot->gold));
    return view.slot->gold;
  });
  return out;
}

}  // namespace povshift
