#include "povshift/lexicon.hpp"

#include <map>
#include <stdexcept>

#include "povshift/util.hpp"

namespace povshift {

std::string to_string(CaseClass c) {
  switch (c) {
    case CaseClass::nominative: return "nominative";
    case CaseClass::accusative: return "accusative";
    case CaseClass::possessive: return "possessive";
    case CaseClass::reflexive: return "reflexive";
    case CaseClass::non_pronominal: return "non_pronominal";
  }
  return "non_pronominal";
}

std::optional<CaseClass> case_class_from_string(const std::string& s) {
  if (s == "nominative") return CaseClass::nominative;
  if (s == "accusative") return CaseClass::accusative;
  if (s == "possessive") return CaseClass::possessive;
  if (s == "reflexive") return CaseClass::reflexive;
  if (s == "non_pronominal") return CaseClass::non_pronominal;
  return std::nullopt;
}

std::string to_string(Person p) {
  switch (p) {
    case Person::first: return "first";
    case Person::second: return "second";
    case Person::third: return "third";
  }
  return "third";
}

std::string to_string(Number n) {
  switch (n) {
    case Number::singular: return "singular";
    case Number::plural: return "plural";
    case Number::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(Gender g) {
  switch (g) {
    case Gender::masculine: return "masculine";
    case Gender::feminine: return "feminine";
    case Gender::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

using CC = CaseClass;

const std::map<std::string, PronounInfo>& pronoun_table() {
  static const std::map<std::string, PronounInfo> table = {
      {"i", {Person::first, Number::singular, Gender::unknown, {CC::nominative}}},
      {"me", {Person::first, Number::singular, Gender::unknown, {CC::accusative}}},
      {"my", {Person::first, Number::singular, Gender::unknown, {CC::possessive}}},
      {"mine", {Person::first, Number::singular, Gender::unknown, {CC::possessive}}},
      {"myself", {Person::first, Number::singular, Gender::unknown, {CC::reflexive}}},
      {"we", {Person::first, Number::plural, Gender::unknown, {CC::nominative}}},
      {"us", {Person::first, Number::plural, Gender::unknown, {CC::accusative}}},
      {"our", {Person::first, Number::plural, Gender::unknown, {CC::possessive}}},
      {"ours", {Person::first, Number::plural, Gender::unknown, {CC::possessive}}},
      {"ourselves", {Person::first, Number::plural, Gender::unknown, {CC::reflexive}}},
      {"you", {Person::second, Number::unknown, Gender::unknown, {CC::nominative, CC::accusative}}},
      {"your", {Person::second, Number::unknown, Gender::unknown, {CC::possessive}}},
      {"yours", {Person::second, Number::unknown, Gender::unknown, {CC::possessive}}},
      {"yourself", {Person::second, Number::singular, Gender::unknown, {CC::reflexive}}},
      {"yourselves", {Person::second, Number::plural, Gender::unknown, {CC::reflexive}}},
      {"he", {Person::third, Number::singular, Gender::masculine, {CC::nominative}}},
      {"him", {Person::third, Number::singular, Gender::masculine, {CC::accusative}}},
      {"his", {Person::third, Number::singular, Gender::masculine, {CC::possessive}}},
      {"himself", {Person::third, Number::singular, Gender::masculine, {CC::reflexive}}},
      {"he himself", {Person::third, Number::singular, Gender::masculine, {CC::nominative}}},
      {"she", {Person::third, Number::singular, Gender::feminine, {CC::nominative}}},
      {"her", {Person::third, Number::singular, Gender::feminine, {CC::accusative, CC::possessive}}},
      {"hers", {Person::third, Number::singular, Gender::feminine, {CC::possessive}}},
      {"herself", {Person::third, Number::singular, Gender::feminine, {CC::reflexive}}},
      {"she herself", {Person::third, Number::singular, Gender::feminine, {CC::nominative}}},
      {"it", {Person::third, Number::singular, Gender::unknown, {CC::nominative, CC::accusative}}},
      {"its", {Person::third, Number::singular, Gender::unknown, {CC::possessive}}},
      {"itself", {Person::third, Number::singular, Gender::unknown, {CC::reflexive}}},
      {"they", {Person::third, Number::plural, Gender::unknown, {CC::nominative}}},
      {"them", {Person::third, Number::plural, Gender::unknown, {CC::accusative}}},
      {"their", {Person::third, Number::plural, Gender::unknown, {CC::possessive}}},
      {"theirs", {Person::third, Number::plural, Gender::unknown, {CC::possessive}}},
      {"themselves", {Person::third, Number::plural, Gender::unknown, {CC::reflexive}}},
  };
  return table;
}

bool has_case(const PronounInfo& info, CaseClass c) {
  for (CaseClass x : info.cases)
    if (x == c) return true;
  return false;
}

}  // namespace

const PronounInfo* lookup_pronoun(const std::string& surface_lower) {
  auto it = pronoun_table().find(surface_lower);
  return it == pronoun_table().end() ? nullptr : &it->second;
}

bool is_pronoun(const std::string& surface) {
  return lookup_pronoun(lowercase(surface)) != nullptr;
}

CaseClass classify_pronoun_case(const std::string& surface_lower, const std::string& pos,
                                bool is_subject) {
  const PronounInfo* info = lookup_pronoun(surface_lower);
  if (!info) return CaseClass::non_pronominal;
  if (info->cases.size() == 1) return info->cases[0];
  if (pos == "PRP$") return CaseClass::possessive;
  if (has_case(*info, CaseClass::nominative) && is_subject) return CaseClass::nominative;
  if (has_case(*info, CaseClass::accusative)) return CaseClass::accusative;
  return info->cases[0];
}

bool is_deictic_pronoun(const std::string& surface, Person person) {
  const PronounInfo* info = lookup_pronoun(lowercase(surface));
  return info && info->person == person && person != Person::third;
}

bool is_first_or_second_pronoun(const std::string& surface) {
  const PronounInfo* info = lookup_pronoun(lowercase(surface));
  return info && info->person != Person::third;
}

bool is_third_singular_pronoun(const std::string& surface, Gender gender) {
  const PronounInfo* info = lookup_pronoun(lowercase(surface));
  return info && info->person == Person::third && info->number == Number::singular &&
         info->gender == gender && gender != Gender::unknown;
}

bool is_human_pronoun(const std::string& surface) {
  const PronounInfo* info = lookup_pronoun(lowercase(surface));
  if (!info) return false;
  if (info->person != Person::third) return true;
  return info->gender != Gender::unknown;  // he/she families; it/they stay ambiguous
}

bool is_plural_pronoun(const std::string& surface) {
  const PronounInfo* info = lookup_pronoun(lowercase(surface));
  return info && info->number == Number::plural;
}

std::optional<std::string> agreement_pronoun(Gender gender, Number number, CaseClass wanted) {
  if (number == Number::plural) {
    switch (wanted) {
      case CC::nominative: return "they";
      case CC::accusative: return "them";
      case CC::possessive: return "their";
      case CC::reflexive: return "themselves";
      default: return std::nullopt;
    }
  }
  if (gender == Gender::masculine) {
    switch (wanted) {
      case CC::nominative: return "he";
      case CC::accusative: return "him";
      case CC::possessive: return "his";
      case CC::reflexive: return "himself";
      default: return std::nullopt;
    }
  }
  if (gender == Gender::feminine) {
    switch (wanted) {
      case CC::nominative: return "she";
      case CC::accusative: return "her";
      case CC::possessive: return "her";
      case CC::reflexive: return "herself";
      default: return std::nullopt;
    }
  }
  return std::nullopt;
}

Gender kinship_noun_gender(const std::string& noun_lower) {
  static const std::map<std::string, Gender> table = {
      {"father", Gender::masculine},      {"mother", Gender::feminine},
      {"dad", Gender::masculine},         {"mom", Gender::feminine},
      {"brother", Gender::masculine},     {"sister", Gender::feminine},
      {"son", Gender::masculine},         {"daughter", Gender::feminine},
      {"uncle", Gender::masculine},       {"aunt", Gender::feminine},
      {"nephew", Gender::masculine},      {"niece", Gender::feminine},
      {"grandfather", Gender::masculine}, {"grandmother", Gender::feminine},
      {"grandson", Gender::masculine},    {"granddaughter", Gender::feminine},
      {"husband", Gender::masculine},     {"wife", Gender::feminine},
      {"boyfriend", Gender::masculine},   {"girlfriend", Gender::feminine},
      {"king", Gender::masculine},        {"queen", Gender::feminine},
      {"widower", Gender::masculine},     {"widow", Gender::feminine},
      {"stepfather", Gender::masculine},  {"stepmother", Gender::feminine},
      {"godfather", Gender::masculine},   {"godmother", Gender::feminine},
  };
  auto it = table.find(noun_lower);
  return it == table.end() ? Gender::unknown : it->second;
}

}  // namespace povshift
