#pragma once

#include <string>

#include "povshift/json_io.hpp"
#include "povshift/select.hpp"

#ifndef POVSHIFT_DATA_DIR
#define POVSHIFT_DATA_DIR "data"
#endif
#ifndef POVSHIFT_FIXTURE_DIR
#define POVSHIFT_FIXTURE_DIR "tests/fixtures"
#endif

namespace povtest {

inline std::string data_path(const std::string& name) {
  return std::string(POVSHIFT_DATA_DIR) + "/" + name;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(POVSHIFT_FIXTURE_DIR) + "/" + name;
}

inline povshift::LoadedDocument load_flynn() {
  return povshift::load_document_json(fixture_path("flynn_excerpt.json"));
}

// Pipeline resources for the memoir excerpt: masculine first-person narrator
// named Nick Flynn, lexicons loaded from the shipped data files.
inline povshift::PipelineConfig flynn_config() {
  povshift::PipelineConfig cfg;
  cfg.spec.full_name = "Nick Flynn";
  cfg.spec.given_name = "Nick";
  cfg.spec.family_name = "Flynn";
  cfg.spec.gender = povshift::Gender::masculine;
  cfg.spec.from_pov = povshift::Person::first;
  cfg.verbs = povshift::VerbDictionary::load(data_path("verb_conjugations.tsv"));
  cfg.rules = povshift::DependencyRules::load(data_path("dependency_rules.txt"));
  cfg.relational = povshift::RelationalLexicon::load(data_path("relational_nouns.tsv"));
  cfg.performatives = povshift::PerformativeLexicon::load(data_path("performative_verbs.txt"));
  return cfg;
}

}  // namespace povtest
