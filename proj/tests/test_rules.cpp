#include <catch2/catch_amalgamated.hpp>

#include "umrkit/rules.hpp"

using namespace umr;

TEST_CASE("default rule file ships the documented mappings") {
  ConversionRuleSet rules = load_rules(UMRKIT_DEFAULT_RULES);

  CHECK(rules.removed_roles.count(":aspect"));
  CHECK(rules.removed_roles.count(":modstr"));
  CHECK(rules.removed_roles.count(":modpred"));
  CHECK(rules.removed_roles.count(":quot"));

  CHECK(rules.role_renames.at(":material") == ":consist-of");
  CHECK(rules.role_renames.at(":concessive-condition") == ":condition");
  CHECK(rules.concept_renames.at("have-91") == "have-03");
  CHECK(rules.strip_wiki);

  CHECK(rules.pronoun_policy.pronoun(Person::Third, Number::Singular) == "they");
  CHECK(rules.pronoun_policy.pronoun(Person::Third, Number::Plural) == "they");
  CHECK(rules.pronoun_policy.pronoun(Person::First, Number::Unspecified) == "i");
  CHECK(rules.pronoun_policy.pronoun(Person::First, Number::Plural) == "we");
  CHECK(rules.pronoun_policy.pronoun(Person::Second, Number::Dual) == "you");
  CHECK(rules.pronoun_policy.pronoun(Person::Unspecified, Number::Plural) == "they");
}

TEST_CASE("resolve_pronoun follows the policy table") {
  PronounPolicy policy = PronounPolicy::defaults();
  CHECK(resolve_pronoun(Person::Third, Number::Singular, policy) == "they");
  CHECK(resolve_pronoun(Person::Third, Number::Plural, policy) == "they");
  CHECK(resolve_pronoun(Person::First, Number::Unspecified, policy) == "i");
  CHECK(resolve_pronoun(Person::First, Number::Plural, policy) == "we");
  CHECK(resolve_pronoun(Person::First, Number::Dual, policy) == "we");
  CHECK(resolve_pronoun(Person::Second, Number::Paucal, policy) == "you");
  CHECK(policy.total());
}

TEST_CASE("feature value parsing is case-insensitive and forgiving") {
  CHECK(parse_person("3rd") == Person::Third);
  CHECK(parse_person("3RD") == Person::Third);
  CHECK(parse_person("First") == Person::First);
  CHECK(parse_person("???") == Person::Unspecified);
  CHECK(parse_number("Singular") == Number::Singular);
  CHECK(parse_number("singular") == Number::Singular);
  CHECK(parse_number("PAUCAL") == Number::Paucal);
  CHECK(parse_number("") == Number::Unspecified);
}

TEST_CASE("role in both REMOVE and RENAME-ROLE is a conflict") {
  std::string text = "REMOVE\n:aspect\nRENAME-ROLE\n:aspect -> :mode\n";
  try {
    parse_rules(text);
    FAIL("expected rule_error");
  } catch (const rule_error& e) {
    CHECK(e.kind() == rule_error::Kind::RuleConflict);
  }
}

TEST_CASE("rename chains resolve, cycles are conflicts") {
  auto rules = parse_rules("RENAME-ROLE\n:a -> :b\n:b -> :c\n");
  CHECK(rules.role_renames.at(":a") == ":c");
  CHECK(rules.role_renames.at(":b") == ":c");

  CHECK_THROWS_AS(parse_rules("RENAME-ROLE\n:a -> :b\n:b -> :a\n"), rule_error);
  CHECK_THROWS_AS(parse_rules("RENAME-CONCEPT\nx -> y\ny -> z\nz -> x\n"), rule_error);
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(parse_rules("stray content\n"), rule_error);
  CHECK_THROWS_AS(parse_rules("REMOVE\naspect\n"), rule_error);             // missing ':'
  CHECK_THROWS_AS(parse_rules("RENAME-ROLE\n:a :b\n"), rule_error);         // no arrow
  CHECK_THROWS_AS(parse_rules("RENAME-ROLE\n:a -> :a\n"), rule_error);      // identity
  CHECK_THROWS_AS(parse_rules("OPTIONS\nstrip-wiki = maybe\n"), rule_error);
  CHECK_THROWS_AS(parse_rules("PRONOUN\n9th * x\n"), rule_error);
  CHECK_THROWS_AS(load_rules("/nonexistent/path.rules"), rule_error);
}

TEST_CASE("partial pronoun section must still cover the whole domain") {
  try {
    parse_rules("PRONOUN\n3rd * they\n");
    FAIL("expected rule_error");
  } catch (const rule_error& e) {
    CHECK(e.kind() == rule_error::Kind::RuleFileSyntax);
    CHECK(std::string(e.what()).find("1st") != std::string::npos);
  }
  // Wildcard base row plus overrides is total.
  auto rules = parse_rules("PRONOUN\n* * they\n1st singular i\n");
  CHECK(rules.pronoun_policy.pronoun(Person::First, Number::Singular) == "i");
  CHECK(rules.pronoun_policy.pronoun(Person::Second, Number::Dual) == "they");
}

TEST_CASE("options and comments") {
  auto rules = parse_rules("# leading comment\nOPTIONS\nstrip-wiki = false\n");
  CHECK(!rules.strip_wiki);
  auto rules2 = parse_rules("REMOVE\n:aspect # trailing comment\n");
  CHECK(rules2.removed_roles.count(":aspect"));
}
