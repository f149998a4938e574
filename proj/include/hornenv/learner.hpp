#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hornenv/clause.hpp"
#include "hornenv/model.hpp"
#include "hornenv/oracle.hpp"

namespace hornenv {

// Working sets of the envelope learner.
struct LearnerState {
  std::size_t width = 0;
  ModelSet positives;            // E⁺
  std::vector<Model> negatives;  // E⁻, scanned front to back
  ModelSet nonhorn;              // Eⁿʰ
  std::vector<MetaClause> horn;  // H = {horn_{E⁺}(e) | e ∈ E⁻}
  std::vector<Model> quasi;      // Q, as the models the quasi clauses exclude

  explicit LearnerState(std::size_t w = 0) : width(w), positives(w), nonhorn(w) {}

  Hypothesis hypothesis() const { return Hypothesis{width, horn, quasi}; }
};

// Moves every e ∈ E⁻ with E⁺_e ≠ ∅ and e = ⋂E⁺_e into Eⁿʰ, keeping the order
// of the survivors. Returns the promoted models.
std::vector<Model> promote_non_horn(LearnerState& state);

// Recomputes H and Q from E⁻, E⁺ and Eⁿʰ. Throws std::logic_error if a
// metaclause with an empty definite consequent survives (promotion must run
// first).
void rebuild_hypothesis(LearnerState& state);

// Structural invariants of a state produced from a consistent oracle:
// E⁻ has no duplicates and is disjoint from Eⁿʰ, H falsifies every e ∈ E⁻
// and satisfies every e ∈ E⁺, Q excludes exactly Eⁿʰ, and for e_i ⊂ e_j in
// E⁻: e_i ⊆ ⋂E⁺_{e_i} ⊆ e_j. Returns one message per violation.
std::vector<std::string> check_state_invariants(const LearnerState& state);

enum class Branch { positive, replace, append, yes };

struct IterationRecord {
  std::size_t iteration = 0;  // 1-based EQ number
  Branch branch = Branch::yes;
  std::optional<Model> counterexample;
  std::optional<std::size_t> position;  // E⁻ slot refined (replace)
  std::vector<Model> promoted;
  std::size_t horn_size = 0;
  std::size_t quasi_size = 0;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

struct LearnerStats {
  std::size_t eq_count = 0;
  std::size_t mq_count = 0;
  std::size_t neg_counterexamples = 0;
  std::size_t pos_counterexamples = 0;
  std::size_t replacements = 0;
  std::size_t appends = 0;
  std::size_t promotions = 0;
  std::size_t k_observed = 0;  // |Eⁿʰ| at termination
  // Appends of a model that had been appended earlier in the run (it must
  // have been refined away in between).
  std::size_t repeated_appends = 0;
};

enum class Termination { oracle_yes, budget_exhausted };

struct LearnerResult {
  std::vector<MetaClause> horn;
  std::vector<Clause> quasi;
  LearnerStats stats;
  Termination termination = Termination::budget_exhausted;
  LearnerState state;
  std::vector<std::string> invariant_violations;
};

struct LearnerOptions {
  std::optional<std::size_t> eq_budget;  // maximum number of EQs
  bool check_invariants = false;         // run check_state_invariants after every round
  IterationObserver observer;
};

// Horn envelope learner. The hypothesis used to classify a counterexample
// and to test x ∩ e is the one posed in that round's EQ.
LearnerResult learn_envelope(MembershipSession& membership, EquivalenceOracle& equivalence,
                             std::size_t width, const LearnerOptions& options = {});

// Angluin's HORN. May cycle forever on non-Horn targets, hence the mandatory
// iteration cap.
LearnerResult learn_classic_horn(MembershipSession& membership, EquivalenceOracle& equivalence,
                                 std::size_t width, std::size_t max_iterations,
                                 const IterationObserver& observer = {});

// Replays a fixed answer sequence regardless of the hypothesis (nullopt =
// "yes"). With a reference target attached, answers that do not separate the
// hypothesis from the target are recorded in warnings() but still returned.
class ScriptedEquivalence final : public EquivalenceOracle {
 public:
  explicit ScriptedEquivalence(std::vector<std::optional<Model>> script, bool cycle = false,
                               std::optional<Formula> reference = std::nullopt);

  EquivalenceMode mode() const override { return EquivalenceMode::scripted; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 protected:
  std::optional<Model> answer(const Hypothesis& hyp) override;

 private:
  std::vector<std::optional<Model>> script_;
  bool cycle_;
  std::optional<Formula> reference_;
  std::size_t next_ = 0;
  std::vector<std::string> warnings_;
};

struct BoundCheck {
  bool ok = false;
  std::size_t counterexample_limit = 0;  // (|V|+1)(|env|+k), for each sign
  std::size_t membership_limit = 0;      // (|env|+k)·(|V|+1)(|env|+k)
};

BoundCheck check_bounds(const LearnerResult& result, std::size_t env_size, std::size_t k,
                        std::size_t width);
bool assert_bounds(const LearnerResult& result, std::size_t env_size, std::size_t k,
                   std::size_t width);

}  // namespace hornenv
