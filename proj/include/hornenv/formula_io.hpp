#pragma once

// Line-oriented clause format:
//
//   vars: a b c d        optional header, fixes bit order
//   a b -> c d           ⋀{a,b} → ⋁{c,d}
//   a b ->               ⋀{a,b} → ⊥
//   -> c                 unit clause c
//   # comment
//
// Metaclause files use "=>" with a conjunctive consequent; "a b =>" is ⊥.

#include <string>
#include <string_view>
#include <vector>

#include "hornenv/clause.hpp"
#include "hornenv/model.hpp"

namespace hornenv {

struct ParsedFormula {
  VariableUniverse vars;
  Formula formula;
};

struct ParsedMetaFormula {
  VariableUniverse vars;
  std::vector<MetaClause> clauses;
};

// Variables are declared by the header or by first use. When a header is
// present every variable must appear in it.
ParsedFormula parse_formula(std::string_view text);
// Every name must already exist in `vars`.
Formula parse_formula(std::string_view text, const VariableUniverse& vars);

ParsedMetaFormula parse_metaformula(std::string_view text);
std::vector<MetaClause> parse_metaformula(std::string_view text, const VariableUniverse& vars);

std::string format_clause(const Clause& c, const VariableUniverse& vars);
std::string format_metaclause(const MetaClause& m, const VariableUniverse& vars);
std::string format_formula(const Formula& f, const VariableUniverse& vars, bool header = true);
std::string format_metaformula(const std::vector<MetaClause>& h, const VariableUniverse& vars,
                               bool header = true);

// Whitespace-separated names, e.g. "a c" → {a,c}; "{}" or "" is the empty model.
Model parse_model(std::string_view text, const VariableUniverse& vars);

ParsedFormula read_formula_file(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace hornenv
