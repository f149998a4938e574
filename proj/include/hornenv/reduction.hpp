#pragma once

// CNF over V  <->  Horn-shaped CNF over V ∪ V¬, where v¬ stands for ¬v.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hornenv/clause.hpp"
#include "hornenv/learner.hpp"
#include "hornenv/model.hpp"
#include "hornenv/oracle.hpp"

namespace hornenv {

inline constexpr std::string_view kDualSuffix = "_neg";

// Base variables at 0..n-1, their duals at n..2n-1.
class ExtendedUniverse {
 public:
  explicit ExtendedUniverse(VariableUniverse base);

  const VariableUniverse& base() const noexcept { return base_; }
  const VariableUniverse& combined() const noexcept { return combined_; }
  std::size_t base_size() const noexcept { return base_.size(); }
  std::size_t size() const noexcept { return combined_.size(); }

  bool is_dual(std::size_t i) const { return i >= base_size(); }
  // The involution p ↦ p°.
  std::size_t dual(std::size_t i) const;

 private:
  VariableUniverse base_;
  VariableUniverse combined_;
};

struct EncodedFormula {
  Formula phi_neg;    // one ⋀(P ∪ Q¬) → ⊥ per clause ⋀P → ⋁Q
  Formula chi_setup;  // v ∧ v¬ → ⊥ and ⊤ → v ∨ v¬ for every v

  Formula combined() const;  // enc(φ) = φ¬ ∧ χ_setup
};

// All functions below work on widths: a formula or model over V has width n,
// one over V ∪ V¬ has width 2n.
EncodedFormula encode_formula(const Formula& phi);
Formula encode(const Formula& phi);

// x¬ = x ∪ {p¬ | p ∉ x}.
Model encode_model(const Model& x);
// y with y¬ = x, if x has that form.
std::optional<Model> decode_model(const Model& x);

// Substitutes ¬v for v¬ and cancels double negations: duals in the
// antecedent move to the consequent as their base variable and vice versa.
// Clauses are kept as produced, tautologies included.
Formula decode_formula(const Formula& psi);

// φ¬ ∪ {p ∧ p¬ → ⊥} ∪ {⋀(ant(h)∖{p}) → p° | h ∈ φ¬, p ∈ ant(h)}.
Formula explicit_envelope(const Formula& phi);

struct LiftedCounterexample {
  Model base;    // x, from the CNF oracle
  Model lifted;  // x¬, handed to the envelope learner
  bool negative = false;       // MQ_φ(x) = negative
  bool horn_negative = false;  // negative and x¬ ⊨ ψ
};

struct CnfLearnResult {
  Formula formula;  // dec(ψ) accepted by the CNF oracle
  bool converged = false;
  LearnerResult learner;
  std::vector<LiftedCounterexample> counterexamples;
};

// Learns an arbitrary CNF φ over `vars` by running the envelope learner on
// enc(φ) over V ∪ V¬. Membership queries not of the form y¬ are answered
// "negative"; every Horn EQ on ψ is posed to `equivalence` as dec(ψ).
CnfLearnResult learn_cnf_via_envelope(MembershipOracle& membership,
                                      ExactCnfEquivalence& equivalence,
                                      const VariableUniverse& vars,
                                      const LearnerOptions& options = {});

}  // namespace hornenv
