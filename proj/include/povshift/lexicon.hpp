#pragma once

#include <optional>
#include <string>
#include <vector>

namespace povshift {

enum class Person { first, second, third };
enum class Number { singular, plural, unknown };
enum class Gender { masculine, feminine, unknown };

// Five-way case classification. Every mention gets exactly one class; the
// narrowing rule is total over this enum.
enum class CaseClass { nominative, accusative, possessive, reflexive, non_pronominal };

std::string to_string(CaseClass c);
std::optional<CaseClass> case_class_from_string(const std::string& s);
std::string to_string(Person p);
std::string to_string(Number n);
std::string to_string(Gender g);

struct PronounInfo {
  Person person;
  Number number;
  Gender gender;                 // unknown for I/you/we/they
  std::vector<CaseClass> cases;  // some surfaces cover several cases ("her", "you")
};

// Closed pronoun inventory, lowercase keys. Includes the emphatic two-word
// forms "he himself" / "she herself".
const PronounInfo* lookup_pronoun(const std::string& surface_lower);
bool is_pronoun(const std::string& surface);

// Resolves one case for an ambiguous surface using POS and grammatical role.
// "her" PRP$ -> possessive, PRP -> accusative; "you" subject -> nominative.
CaseClass classify_pronoun_case(const std::string& surface_lower, const std::string& pos,
                                bool is_subject);

// Deictic = 1st/2nd person personal pronoun (any case).
bool is_deictic_pronoun(const std::string& surface, Person person);
bool is_first_or_second_pronoun(const std::string& surface);

// 3rd person singular pronoun of the given gender (he/him/his/himself etc).
bool is_third_singular_pronoun(const std::string& surface, Gender gender);

// Pronoun that counts as evidence the chain denotes people (I, he, she, ...).
bool is_human_pronoun(const std::string& surface);
bool is_plural_pronoun(const std::string& surface);

// Agreement pronoun for the only-pronouns selector.
std::optional<std::string> agreement_pronoun(Gender gender, Number number, CaseClass wanted);

// Gender a kinship noun implies for its referent ("sister" -> feminine).
Gender kinship_noun_gender(const std::string& noun_lower);

// Reserved strings used inside token and mention windows.
inline const std::string kPadToken = "<pad>";
inline const std::string kSepToken = "<sep>";
inline const std::string kUnkToken = "<unk>";

}  // namespace povshift
