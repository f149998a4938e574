#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hornenv/clause.hpp"
#include "hornenv/logic.hpp"
#include "hornenv/model.hpp"

namespace hornenv {

enum class Label { negative, positive };

std::string_view to_string(Label label);

// Answers MQ(x): positive iff x is a model of the hidden target.
class MembershipOracle {
 public:
  virtual ~MembershipOracle() = default;

  virtual std::size_t width() const = 0;
  virtual Label classify(const Model& x) = 0;
  // True if classify() may be called from several threads at once.
  virtual bool concurrent() const { return false; }
};

class FormulaOracle final : public MembershipOracle {
 public:
  explicit FormulaOracle(Formula target) : target_(std::move(target)) {}

  std::size_t width() const override { return target_.width(); }
  Label classify(const Model& x) override;
  bool concurrent() const override { return true; }

  const Formula& target() const noexcept { return target_; }

 private:
  Formula target_;
};

class FunctionOracle final : public MembershipOracle {
 public:
  FunctionOracle(std::size_t width, std::function<Label(const Model&)> fn)
      : width_(width), fn_(std::move(fn)) {}

  std::size_t width() const override { return width_; }
  Label classify(const Model& x) override { return fn_(x); }

 private:
  std::size_t width_;
  std::function<Label(const Model&)> fn_;
};

// The learner's view of a membership oracle. Counts logical queries and
// underlying oracle calls separately, optionally caches answers, and
// enforces the determinism contract: an oracle that gives two different
// labels for the same model raises ProtocolError.
class MembershipSession {
 public:
  explicit MembershipSession(MembershipOracle& oracle, bool cache = true)
      : oracle_(&oracle), cache_(cache) {}

  Label query(const Model& x);

  std::size_t width() const { return oracle_->width(); }
  std::size_t queries() const noexcept { return queries_; }
  std::size_t oracle_calls() const noexcept { return oracle_calls_; }
  bool caching() const noexcept { return cache_; }

 private:
  MembershipOracle* oracle_;
  bool cache_;
  std::size_t queries_ = 0;
  std::size_t oracle_calls_ = 0;
  std::unordered_map<Model, Label, ModelHash> seen_;
};

enum class EquivalenceMode { exact, sampled, scripted };

// EQ(H ∪ Q): nullopt means "yes", otherwise a counterexample on which the
// hypothesis and the target disagree.
class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;

  std::optional<Model> query(const Hypothesis& hyp) {
    ++queries_;
    return answer(hyp);
  }

  std::size_t queries() const noexcept { return queries_; }
  virtual EquivalenceMode mode() const = 0;

 protected:
  virtual std::optional<Model> answer(const Hypothesis& hyp) = 0;

 private:
  std::size_t queries_ = 0;
};

// Horn equivalence by enumeration: "yes" iff closure(mod φ) equals
// closure(mod H∪Q); otherwise the smallest model of mod φ ⊕ mod(H∪Q).
class ExactHornEquivalence final : public EquivalenceOracle {
 public:
  explicit ExactHornEquivalence(Formula target, std::size_t cap = kDefaultBruteForceCap);

  EquivalenceMode mode() const override { return EquivalenceMode::exact; }

  const ModelSet& target_models() const noexcept { return models_; }
  const ModelSet& envelope_models() const noexcept { return envelope_; }

 protected:
  std::optional<Model> answer(const Hypothesis& hyp) override;

 private:
  Formula target_;
  std::size_t cap_;
  ModelSet models_;
  ModelSet envelope_;
};

// Plain CNF equivalence (mod φ = mod ψ), smallest symmetric-difference model
// as counterexample.
class ExactCnfEquivalence {
 public:
  explicit ExactCnfEquivalence(Formula target, std::size_t cap = kDefaultBruteForceCap);

  std::optional<Model> query(const Formula& hypothesis);
  std::size_t queries() const noexcept { return queries_; }

 private:
  Formula target_;
  std::size_t cap_;
  ModelSet models_;
  std::size_t queries_ = 0;
};

// Smallest model in a ⊕ b (both sets share a width), if any.
std::optional<Model> smallest_difference(const ModelSet& a, const ModelSet& b);

// One attribute block of a one-hot sample space.
struct SampleBlock {
  std::vector<std::size_t> variables;
  // allow_none: the block may be all zeros ("unknown value"). A block with
  // allow_none == false always has exactly one bit set (e.g. the label).
  bool allow_none = true;
};

enum class SampleSpace { all_subsets, one_hot_groups };

struct SamplerConfig {
  std::size_t batch_size = 1;
  std::uint64_t seed = 0;
  SampleSpace space = SampleSpace::all_subsets;
  std::vector<SampleBlock> blocks;  // one_hot_groups only; must partition the variables
  // After a clean batch, compare against every model of the sample space
  // before answering "yes". Only for small spaces.
  bool final_exact_check = false;
  std::size_t exact_check_cap = kDefaultBruteForceCap;

  void validate(std::size_t width) const;
};

// Draws models uniformly from the configured space with a seeded generator.
class ModelSampler {
 public:
  ModelSampler(std::size_t width, const SamplerConfig& cfg);

  Model draw();
  std::vector<Model> batch(std::size_t n);
  // Every model of the space in a fixed order; throws CapExceeded when the
  // space has more than 2^cap members.
  std::vector<Model> enumerate(std::size_t cap) const;

 private:
  std::size_t width_;
  SamplerConfig cfg_;
  std::mt19937_64 rng_;
};

// Simulated equivalence query: draw a batch and return the first sampled x
// where the hypothesis disagrees with the membership oracle.
class SampledEquivalence final : public EquivalenceOracle {
 public:
  SampledEquivalence(MembershipSession& membership, SamplerConfig cfg);

  EquivalenceMode mode() const override { return EquivalenceMode::sampled; }

  // Models drawn for the most recent query, in draw order.
  const std::vector<Model>& last_batch() const noexcept { return last_batch_; }
  std::size_t membership_queries() const noexcept { return mq_; }

 protected:
  std::optional<Model> answer(const Hypothesis& hyp) override;

 private:
  MembershipSession* membership_;
  SamplerConfig cfg_;
  ModelSampler sampler_;
  std::vector<Model> last_batch_;
  std::size_t mq_ = 0;
};

}  // namespace hornenv
