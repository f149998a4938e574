#include "hornenv/clause.hpp"

#include <algorithm>

#include "hornenv/errors.hpp"
#include "hornenv/logic.hpp"

namespace hornenv {

Clause::Clause(Model ant, Model con) : antecedent(std::move(ant)), consequent(std::move(con)) {
  if (antecedent.width() != consequent.width()) {
    throw UsageError("clause antecedent and consequent widths differ");
  }
}

MetaClause MetaClause::bottom(Model ant) {
  MetaClause m;
  m.consequent = Model(ant.width());
  m.antecedent = std::move(ant);
  m.negative = true;
  return m;
}

MetaClause MetaClause::implies(Model ant, Model con) {
  if (ant.width() != con.width()) {
    throw UsageError("metaclause antecedent and consequent widths differ");
  }
  MetaClause m;
  m.antecedent = std::move(ant);
  m.consequent = std::move(con);
  m.negative = false;
  return m;
}

Formula::Formula(std::size_t width, std::vector<Clause> clauses) : width_(width) {
  for (auto& c : clauses) add(std::move(c));
}

void Formula::add(Clause c) {
  if (c.width() != width_) {
    throw UsageError("clause width " + std::to_string(c.width()) +
                     " does not match formula width " + std::to_string(width_));
  }
  clauses_.push_back(std::move(c));
}

FormulaKind Formula::kind() const noexcept {
  const bool horn = std::all_of(clauses_.begin(), clauses_.end(),
                                [](const Clause& c) { return c.is_horn(); });
  return horn ? FormulaKind::horn : FormulaKind::general_cnf;
}

Formula to_formula(std::size_t width, const std::vector<MetaClause>& metaclauses) {
  Formula f(width);
  for (const auto& m : metaclauses) {
    if (m.width() != width) throw UsageError("metaclause width mismatch");
    if (m.negative) {
      f.add(Clause(m.antecedent, Model(width)));
      continue;
    }
    for (auto q : m.consequent.indices()) {
      f.add(Clause(m.antecedent, Model(width, {q})));
    }
  }
  return f;
}

Formula to_formula(const Hypothesis& hyp) {
  Formula f = to_formula(hyp.width, hyp.horn);
  for (const auto& x : hyp.quasi) f.add(make_quasi(x));
  return f;
}

}  // namespace hornenv
