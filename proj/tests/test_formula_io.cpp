#include <doctest.h>

#include "hornenv/errors.hpp"
#include "hornenv/formula_io.hpp"

using namespace hornenv;

TEST_CASE("parse declares variables by first use") {
  const auto p = parse_formula("a b -> c d\n# comment\nb ->\n-> c   # unit\n");
  CHECK(p.vars.names() == std::vector<std::string>{"a", "b", "c", "d"});
  REQUIRE(p.formula.size() == 3);
  CHECK(p.formula.clauses()[0].antecedent == Model(4, {0, 1}));
  CHECK(p.formula.clauses()[0].consequent == Model(4, {2, 3}));
  CHECK(p.formula.clauses()[1].consequent.none());
  CHECK(p.formula.clauses()[2].antecedent.none());
  CHECK_FALSE(p.formula.is_horn());
}

TEST_CASE("header fixes the order and the vocabulary") {
  const auto p = parse_formula("vars: d c b a\na -> b\n");
  CHECK(p.vars.names() == std::vector<std::string>{"d", "c", "b", "a"});
  CHECK(p.formula.clauses()[0].antecedent == Model(4, {3}));
  CHECK_THROWS_AS(parse_formula("vars: a b\na -> z\n"), ParseError);
  CHECK_THROWS_AS(parse_formula("a -> b\nvars: a b\n"), ParseError);
  CHECK_THROWS_AS(parse_formula("vars: a a\n"), ParseError);
}

TEST_CASE("malformed lines report their line number") {
  try {
    parse_formula("a -> b\n\na b c\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_formula("a -> b -> c\n"), ParseError);
}

TEST_CASE("parsing against a fixed universe") {
  const VariableUniverse u({"x", "y"});
  CHECK(parse_formula("x -> y", u).size() == 1);
  CHECK_THROWS_AS(parse_formula("x -> z", u), ParseError);
}

TEST_CASE("format and parse round-trip") {
  const auto p = parse_formula("vars: a b c d\na b -> c d\nb ->\n-> c\n");
  const std::string text = format_formula(p.formula, p.vars);
  CHECK(text == "vars: a b c d\na b -> c d\nb ->\n-> c\n");
  const auto q = parse_formula(text);
  CHECK(q.vars == p.vars);
  CHECK(q.formula == p.formula);
}

TEST_CASE("metaformulas") {
  const auto p = parse_metaformula("vars: a b c\na => b c\nb =>\n");
  REQUIRE(p.clauses.size() == 2);
  CHECK(p.clauses[0] == MetaClause::implies(Model(3, {0}), Model(3, {1, 2})));
  CHECK(p.clauses[1] == MetaClause::bottom(Model(3, {1})));
  CHECK(format_metaformula(p.clauses, p.vars) == "vars: a b c\na => b c\nb =>\n");
}

TEST_CASE("models") {
  const VariableUniverse u({"a", "b", "c"});
  CHECK(parse_model("{a,c}", u) == Model(3, {0, 2}));
  CHECK(parse_model("b c", u) == Model(3, {1, 2}));
  CHECK(parse_model("{}", u).none());
  CHECK_THROWS_AS(parse_model("q", u), UsageError);
}

TEST_CASE("files") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/file"), ConfigError);
  const auto p = read_formula_file(std::string(HORNENV_DATA_DIR) + "/cycling_target.txt");
  CHECK(p.vars.size() == 4);
  CHECK(p.formula.size() == 2);
}
