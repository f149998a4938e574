#include "hornenv/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "hornenv/errors.hpp"

namespace hornenv {

std::string_view to_string(Label label) {
  return label == Label::positive ? "positive" : "negative";
}

Label FormulaOracle::classify(const Model& x) {
  return satisfies(x, target_) ? Label::positive : Label::negative;
}

Label MembershipSession::query(const Model& x) {
  if (x.width() != oracle_->width()) {
    throw UsageError("membership query of width " + std::to_string(x.width()) +
                     " against oracle of width " + std::to_string(oracle_->width()));
  }
  ++queries_;
  auto it = seen_.find(x);
  if (cache_ && it != seen_.end()) return it->second;
  const Label label = oracle_->classify(x);
  ++oracle_calls_;
  if (it == seen_.end()) {
    seen_.emplace(x, label);
  } else if (it->second != label) {
    throw ProtocolError("membership oracle answered inconsistently for model " + to_bitstring(x),
                        std::string(to_string(label)));
  }
  return label;
}

std::optional<Model> smallest_difference(const ModelSet& a, const ModelSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) {
      ++ia;
      ++ib;
    } else {
      return *ia < *ib ? *ia : *ib;
    }
  }
  if (ia != a.end()) return *ia;
  if (ib != b.end()) return *ib;
  return std::nullopt;
}

ExactHornEquivalence::ExactHornEquivalence(Formula target, std::size_t cap)
    : target_(std::move(target)), cap_(cap) {
  models_ = models_of(target_, cap_);
  envelope_ = closure(models_);
}

std::optional<Model> ExactHornEquivalence::answer(const Hypothesis& hyp) {
  if (hyp.width != target_.width()) throw UsageError("hypothesis width mismatch");
  const ModelSet hyp_models = models_of(hyp, cap_);
  if (closure(hyp_models) == envelope_) return std::nullopt;
  auto x = smallest_difference(models_, hyp_models);
  if (!x) throw std::logic_error("closures differ but model sets coincide");
  if (satisfies(*x, hyp) == models_.contains(*x)) {
    throw std::logic_error("exact oracle produced a non-separating counterexample");
  }
  return x;
}

ExactCnfEquivalence::ExactCnfEquivalence(Formula target, std::size_t cap)
    : target_(std::move(target)), cap_(cap), models_(models_of(target_, cap_)) {}

std::optional<Model> ExactCnfEquivalence::query(const Formula& hypothesis) {
  ++queries_;
  if (hypothesis.width() != target_.width()) throw UsageError("hypothesis width mismatch");
  return smallest_difference(models_, models_of(hypothesis, cap_));
}

void SamplerConfig::validate(std::size_t width) const {
  if (batch_size == 0) throw ConfigError("sampler batch size must be at least 1");
  if (space == SampleSpace::all_subsets) return;
  std::vector<int> owner(width, 0);
  for (const auto& b : blocks) {
    if (b.variables.empty()) throw ConfigError("empty sample block");
    for (auto v : b.variables) {
      if (v >= width) throw ConfigError("sample block variable out of range");
      if (owner[v]++ != 0) throw ConfigError("variable appears in more than one sample block");
    }
  }
  if (std::find(owner.begin(), owner.end(), 0) != owner.end()) {
    throw ConfigError("sample blocks must cover every variable");
  }
}

ModelSampler::ModelSampler(std::size_t width, const SamplerConfig& cfg)
    : width_(width), cfg_(cfg), rng_(cfg.seed) {
  cfg_.validate(width_);
}

Model ModelSampler::draw() {
  Model m(width_);
  if (cfg_.space == SampleSpace::all_subsets) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < width_; ++i) {
      if (i % 64 == 0) bits = rng_();
      if ((bits >> (i % 64)) & 1U) m.set(i);
    }
    return m;
  }
  for (const auto& b : cfg_.blocks) {
    const std::size_t options = b.variables.size() + (b.allow_none ? 1 : 0);
    std::uniform_int_distribution<std::size_t> pick(0, options - 1);
    const std::size_t k = pick(rng_);
    if (k < b.variables.size()) m.set(b.variables[k]);
  }
  return m;
}

std::vector<Model> ModelSampler::batch(std::size_t n) {
  std::vector<Model> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw());
  return out;
}

std::vector<Model> ModelSampler::enumerate(std::size_t cap) const {
  if (cfg_.space == SampleSpace::all_subsets) {
    require_enumerable(width_, cap);
    std::vector<Model> out;
    out.reserve(std::size_t{1} << width_);
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << width_); ++w) {
      Model m(width_);
      for (std::size_t i = 0; i < width_; ++i) {
        if ((w >> i) & 1U) m.set(i);
      }
      out.push_back(std::move(m));
    }
    return out;
  }
  double total = 1;
  for (const auto& b : cfg_.blocks) total *= static_cast<double>(b.variables.size() + (b.allow_none ? 1 : 0));
  if (total > static_cast<double>(std::uint64_t{1} << std::min(cap, kMaxBruteForceCap))) {
    throw CapExceeded(width_, cap);
  }
  std::vector<Model> out{Model(width_)};
  for (const auto& b : cfg_.blocks) {
    std::vector<Model> next;
    for (const auto& partial : out) {
      if (b.allow_none) next.push_back(partial);
      for (auto v : b.variables) {
        Model m = partial;
        m.set(v);
        next.push_back(std::move(m));
      }
    }
    out = std::move(next);
  }
  return out;
}

SampledEquivalence::SampledEquivalence(MembershipSession& membership, SamplerConfig cfg)
    : membership_(&membership), cfg_(std::move(cfg)), sampler_(membership.width(), cfg_) {}

std::optional<Model> SampledEquivalence::answer(const Hypothesis& hyp) {
  last_batch_ = sampler_.batch(cfg_.batch_size);
  auto disagrees = [&](const Model& x) {
    ++mq_;
    const bool target = membership_->query(x) == Label::positive;
    return satisfies(x, hyp) != target;
  };
  for (const auto& x : last_batch_) {
    if (disagrees(x)) return x;
  }
  if (cfg_.final_exact_check) {
    for (const auto& x : sampler_.enumerate(cfg_.exact_check_cap)) {
      if (disagrees(x)) return x;
    }
  }
  return std::nullopt;
}

}  // namespace hornenv
