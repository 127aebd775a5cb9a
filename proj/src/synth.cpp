#include "povshift/synth.hpp"

#include <array>
#include <string>

#include "povshift/util.hpp"

namespace povshift {

namespace {

struct NamePool {
  const char* given;
  const char* family;
};

constexpr std::array<NamePool, 4> kWomen = {
    {{"Alice", "Brennan"}, {"Nora", "Quinn"}, {"Elena", "Ruiz"}, {"Iris", "Calloway"}}};
constexpr std::array<NamePool, 4> kMen = {
    {{"Marcus", "Hale"}, {"Victor", "Lang"}, {"Tomas", "Reyes"}, {"Hugo", "Mercer"}}};

constexpr std::array<const char*, 2> kCues = {"Meanwhile", "Later"};
constexpr std::array<const char*, 4> kStarters = {"Soon", "Then", "Next", "Afterward"};
constexpr std::array<const char*, 8> kVerbs = {"signs",  "checks", "counts", "paints",
                                               "opens",  "stacks", "mends",  "sorts"};
constexpr std::array<const char*, 8> kObjects = {"ledger", "gate",   "crate",  "canvas",
                                                 "letter", "engine", "basket", "lantern"};
constexpr std::array<const char*, 8> kPlaces = {"harbor",   "market",  "attic",   "garden",
                                                "workshop", "station", "library", "orchard"};
constexpr std::array<const char*, 8> kTimes = {"dawn",     "noon",    "dusk",    "rain",
                                               "festival", "harvest", "meeting", "recital"};

struct SynthEntity {
  std::string full_name;
  std::string given_name;
  std::string pronoun;
  Gender gender = Gender::unknown;
  std::vector<Mention> mentions;
};

struct DocBuild {
  Document doc;
  int char_pos = 0;

  int add_token(const std::string& surface, const std::string& pos) {
    Token t;
    t.surface = surface;
    t.pos = pos;
    t.lemma = lowercase(surface);
    t.char_start = char_pos;
    t.char_end = char_pos + static_cast<int>(surface.size());
    char_pos = t.char_end + 1;
    if (!doc.source_text.empty()) doc.source_text += ' ';
    doc.source_text += surface;
    doc.tokens.push_back(std::move(t));
    return static_cast<int>(doc.tokens.size()) - 1;
  }
};

}  // namespace

std::vector<Document> generate_corpus(const SynthConfig& cfg) {
  std::vector<Document> docs;
  Rng root(cfg.seed);
  for (int d = 0; d < cfg.n_docs; ++d) {
    Rng rng = root.fork(static_cast<uint64_t>(d) + 1);

    const NamePool& woman = kWomen[rng.next_index(kWomen.size())];
    const NamePool& man = kMen[rng.next_index(kMen.size())];
    std::array<SynthEntity, 2> entities;
    entities[0] = {std::string(woman.given) + " " + woman.family, woman.given, "she",
                   Gender::feminine, {}};
    entities[1] = {std::string(man.given) + " " + man.family, man.given, "he",
                   Gender::masculine, {}};

    DocBuild build;
    build.doc.doc_id = "synth-" + std::to_string(cfg.seed) + "-" + std::to_string(d);
    build.doc.genre = "synthetic";

    int span = cfg.max_sentences - cfg.min_sentences + 1;
    int n_sentences = cfg.min_sentences + static_cast<int>(rng.next_index(span));
    int current = static_cast<int>(rng.next_index(2));
    int previous = -1;

    for (int s = 0; s < n_sentences; ++s) {
      if (s > 0 && rng.next_double() >= cfg.p_same_entity) current = 1 - current;
      bool cue = rng.next_double() < cfg.p_cue;

      int sentence_start = static_cast<int>(build.doc.tokens.size());
      if (cue) {
        build.add_token(kCues[rng.next_index(kCues.size())], "RB");
        build.add_token(",", ",");
      } else {
        build.add_token(kStarters[rng.next_index(kStarters.size())], "RB");
      }

      SynthEntity& entity = entities[current];
      Mention m;
      m.role = GrammaticalRole::subject;
      if (entity.mentions.empty()) {
        int first = build.add_token(entity.given_name, "NNP");
        std::vector<std::string> parts = split_ws(entity.full_name);
        for (size_t p = 1; p < parts.size(); ++p) build.add_token(parts[p], "NNP");
        m.span = {first, static_cast<int>(build.doc.tokens.size()) - 1};
        m.text = entity.full_name;
        m.case_class = CaseClass::non_pronominal;
      } else if (cue || previous != current) {
        int at = build.add_token(entity.given_name, "NNP");
        m.span = {at, at};
        m.text = entity.given_name;
        m.case_class = CaseClass::non_pronominal;
      } else {
        int at = build.add_token(entity.pronoun, "PRP");
        m.span = {at, at};
        m.text = entity.pronoun;
        m.case_class = CaseClass::nominative;
      }
      entity.mentions.push_back(std::move(m));
      previous = current;

      build.add_token(kVerbs[rng.next_index(kVerbs.size())], "VBZ");
      build.add_token("the", "DT");
      build.add_token(kObjects[rng.next_index(kObjects.size())], "NN");
      build.add_token("near", "IN");
      build.add_token("the", "DT");
      build.add_token(kPlaces[rng.next_index(kPlaces.size())], "NN");
      build.add_token("before", "IN");
      build.add_token("the", "DT");
      build.add_token(kTimes[rng.next_index(kTimes.size())], "NN");
      int sentence_end = build.add_token(".", ".");
      build.doc.sentences.push_back({sentence_start, sentence_end});
    }

    for (int e = 0; e < 2; ++e) {
      if (entities[e].mentions.empty()) continue;
      CorefChain chain;
      chain.id = e + 1;
      chain.kind = EntityKind::person;
      chain.pov = Person::third;
      chain.number = Number::singular;
      chain.gender = entities[e].gender;
      chain.mentions = std::move(entities[e].mentions);
      build.doc.chains.push_back(std::move(chain));
    }
    docs.push_back(std::move(build.doc));
  }
  return docs;
}

}  // namespace povshift
