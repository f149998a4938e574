#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hornenv/clause.hpp"
#include "hornenv/learner.hpp"
#include "hornenv/model.hpp"
#include "hornenv/oracle.hpp"

namespace hornenv {

// One discrete attribute, binarized into one variable per value. The value
// strings double as variable names, so they must be unique across the schema.
struct Attribute {
  std::string name;
  std::vector<std::string> values;
  bool allow_unknown = true;  // the all-zeros block is a legal sample
  bool label = false;         // exactly one value is set in every sample
};

struct AttributeSchema {
  std::vector<Attribute> attributes;
};

// {"attributes":[{"name":..,"values":[..],"allow_unknown":bool,"label":bool}, ...]}
AttributeSchema parse_schema(std::string_view json_text);
AttributeSchema load_schema(const std::string& path);

VariableUniverse schema_to_universe(const AttributeSchema& schema);
std::vector<SampleBlock> schema_blocks(const AttributeSchema& schema);

// "nurse & male -> F", "singer & male -> before_1875", "-> F".
std::string render_rule(const MetaClause& m, const VariableUniverse& vars);
std::string render_rule(const MetaClause& m, const AttributeSchema& schema);

std::string_view to_string(Branch b);
std::string_view to_string(Termination t);
// One JSON object (single line) describing a learner iteration.
std::string iteration_record_json(const IterationRecord& rec, const VariableUniverse& vars);

enum class EqMode { exact, sampled };

struct ExperimentConfig {
  VariableUniverse vars;
  // One-hot sampling blocks; empty means all subsets of V.
  std::vector<SampleBlock> blocks;
  // Fresh membership oracle per iteration (each run owns its connection).
  std::function<std::unique_ptr<MembershipOracle>(std::size_t iteration)> make_oracle;
  // Required for exact mode.
  std::optional<Formula> target;

  EqMode eq_mode = EqMode::sampled;
  std::optional<std::size_t> eq_budget = 100;
  std::size_t batch_size = 640;
  std::size_t iterations = 10;
  std::uint64_t seed = 0;  // iteration i samples with seed + i
  std::size_t parallelism = 1;
  bool final_exact_check = false;
  std::size_t threshold = 7;
  bool collect_logs = false;

  void validate() const;
};

struct RunOutcome {
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<MetaClause> horn;
  std::vector<Model> quasi;
  LearnerStats stats;
  Termination termination = Termination::budget_exhausted;
  std::vector<std::string> log;  // JSON lines, when collected
};

struct RuleCount {
  MetaClause rule;
  std::string text;
  std::size_t count = 0;
};

struct RuleReport {
  std::size_t iterations = 0;
  std::size_t threshold = 7;
  std::vector<RuleCount> rules;  // by count descending, then text
  std::vector<RunOutcome> runs;  // by iteration index

  std::size_t failed_iterations() const;
  std::vector<RuleCount> relevant() const;  // count >= threshold
  std::optional<std::size_t> count_of(const std::string& text) const;
  std::string to_text() const;
  std::string to_json() const;
};

// Counts each distinct metaclause once per successful run.
RuleReport aggregate(std::vector<RunOutcome> runs, const VariableUniverse& vars,
                     std::size_t iterations, std::size_t threshold);

RuleReport run_experiment(const ExperimentConfig& cfg);

struct NonterminationDemo {
  std::vector<std::string> transcript;
  LearnerResult classic;
  std::size_t resets = 0;  // counterexamples after which H became empty
  LearnerResult envelope;
  bool envelope_matches = false;  // H ≡ {a → ⊥}
  std::size_t env_size = 0;
  std::size_t k = 0;
  bool bounds_ok = false;
};

// Classic HORN against the cycling adversary {d}, {b,d}, {c,d} on
// {a → ⊥, b ∨ c} over {a,b,c,d}, then the envelope learner on the same target.
NonterminationDemo demo_nontermination(std::size_t cap = 30);

}  // namespace hornenv
