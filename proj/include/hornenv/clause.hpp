#pragma once

#include <cstddef>
#include <vector>

#include "hornenv/model.hpp"

namespace hornenv {

// ⋀antecedent → ⋁consequent. An empty consequent is ⊥.
struct Clause {
  Model antecedent;
  Model consequent;

  Clause() = default;
  Clause(Model ant, Model con);

  std::size_t width() const noexcept { return antecedent.width(); }
  bool is_horn() const noexcept { return consequent.count() <= 1; }

  friend bool operator==(const Clause&, const Clause&) = default;
  friend auto operator<=>(const Clause&, const Clause&) = default;
};

// ⋀antecedent → ⋀consequent, or ⋀antecedent → ⊥ when `negative` is set.
//
// A definite metaclause with an empty consequent is legal only as the
// transient value make_horn returns for an example that has just been shown
// to be non-Horn; it is satisfied by every model.
struct MetaClause {
  Model antecedent;
  Model consequent;
  bool negative = false;

  static MetaClause bottom(Model ant);
  static MetaClause implies(Model ant, Model con);

  std::size_t width() const noexcept { return antecedent.width(); }

  friend bool operator==(const MetaClause&, const MetaClause&) = default;
  friend auto operator<=>(const MetaClause&, const MetaClause&) = default;
};

enum class FormulaKind { general_cnf, horn };

// Conjunction of clauses over a fixed number of variables.
class Formula {
 public:
  Formula() = default;
  explicit Formula(std::size_t width) : width_(width) {}
  Formula(std::size_t width, std::vector<Clause> clauses);

  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return clauses_.size(); }
  bool empty() const noexcept { return clauses_.empty(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }

  void add(Clause c);
  FormulaKind kind() const noexcept;
  bool is_horn() const noexcept { return kind() == FormulaKind::horn; }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<Clause> clauses_;
};

// The learner's hypothesis H ∪ Q. Each quasi clause is stored as the model
// it excludes: quasi(x) is falsified by x and by nothing else.
struct Hypothesis {
  std::size_t width = 0;
  std::vector<MetaClause> horn;
  std::vector<Model> quasi;
};

// Horn clauses equivalent to the metaclauses: ⋀P→⋀Q becomes {⋀P→q | q∈Q},
// ⋀P→⊥ stays as is.
Formula to_formula(std::size_t width, const std::vector<MetaClause>& metaclauses);
// H expanded as above plus the quasi clause of every excluded model.
Formula to_formula(const Hypothesis& hyp);

}  // namespace hornenv
