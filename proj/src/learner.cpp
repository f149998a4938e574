#include "hornenv/learner.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "hornenv/errors.hpp"
#include "hornenv/logic.hpp"

namespace hornenv {

namespace {

// ⋂{e ∈ E⁺ | x ⊂ e}, or V when there is no such e.
Model meet_of_strict_supersets(const ModelSet& positives, const Model& x) {
  Model meet = Model::full(x.width());
  for (const auto& e : positives) {
    if (x.is_strict_subset_of(e)) meet &= e;
  }
  return meet;
}

bool has_strict_superset(const ModelSet& positives, const Model& x) {
  return std::any_of(positives.begin(), positives.end(),
                     [&](const Model& e) { return x.is_strict_subset_of(e); });
}

std::vector<Clause> quasi_clauses(const std::vector<Model>& excluded) {
  std::vector<Clause> out;
  out.reserve(excluded.size());
  for (const auto& x : excluded) out.push_back(make_quasi(x));
  return out;
}

}  // namespace

std::vector<Model> promote_non_horn(LearnerState& state) {
  std::vector<Model> promoted;
  std::vector<Model> kept;
  kept.reserve(state.negatives.size());
  for (auto& e : state.negatives) {
    if (has_strict_superset(state.positives, e) &&
        meet_of_strict_supersets(state.positives, e) == e) {
      promoted.push_back(e);
      state.nonhorn.insert(e);
    } else {
      kept.push_back(std::move(e));
    }
  }
  state.negatives = std::move(kept);
  return promoted;
}

void rebuild_hypothesis(LearnerState& state) {
  state.horn.clear();
  state.horn.reserve(state.negatives.size());
  for (const auto& e : state.negatives) {
    MetaClause m = make_horn(state.positives, e);
    if (!m.negative && m.consequent.none()) {
      throw std::logic_error("non-Horn example " + to_bitstring(e) + " left in E-");
    }
    state.horn.push_back(std::move(m));
  }
  state.quasi = state.nonhorn.models();
}

std::vector<std::string> check_state_invariants(const LearnerState& state) {
  std::vector<std::string> v;
  const auto& neg = state.negatives;

  std::unordered_set<Model, ModelHash> seen;
  for (const auto& e : neg) {
    if (!seen.insert(e).second) v.push_back("duplicate in E-: " + to_bitstring(e));
    if (state.nonhorn.contains(e)) v.push_back("E- and Enh share " + to_bitstring(e));
    if (state.positives.contains(e)) v.push_back("E- and E+ share " + to_bitstring(e));
    if (satisfies(e, state.horn)) v.push_back("H does not falsify E- member " + to_bitstring(e));
  }
  for (const auto& e : state.positives) {
    if (!satisfies(e, state.horn)) v.push_back("H falsifies E+ member " + to_bitstring(e));
  }
  if (ModelSet(state.width, state.quasi) != state.nonhorn || state.quasi.size() != state.nonhorn.size()) {
    v.push_back("Q does not exclude exactly Enh");
  }
  for (const auto& e : state.nonhorn) {
    if (state.positives.contains(e)) v.push_back("Enh and E+ share " + to_bitstring(e));
  }

  for (std::size_t i = 0; i < neg.size(); ++i) {
    const Model meet = meet_of_strict_supersets(state.positives, neg[i]);
    for (std::size_t j = 0; j < neg.size(); ++j) {
      if (i == j || !neg[i].is_strict_subset_of(neg[j])) continue;
      if (!neg[i].is_subset_of(meet) || !meet.is_subset_of(neg[j])) {
        v.push_back("E- pair " + to_bitstring(neg[i]) + " < " + to_bitstring(neg[j]) +
                    " breaks e_i <= meet(E+_{e_i}) <= e_j");
      }
    }
  }
  return v;
}

LearnerResult learn_envelope(MembershipSession& membership, EquivalenceOracle& equivalence,
                             std::size_t width, const LearnerOptions& options) {
  if (membership.width() != width) throw UsageError("membership oracle width mismatch");

  LearnerResult result;
  result.state = LearnerState(width);
  LearnerState& st = result.state;
  LearnerStats& stats = result.stats;
  std::unordered_set<Model, ModelHash> ever_appended;

  for (;;) {
    if (options.eq_budget && stats.eq_count >= *options.eq_budget) {
      result.termination = Termination::budget_exhausted;
      break;
    }
    const Hypothesis hyp = st.hypothesis();
    ++stats.eq_count;
    const auto answer = equivalence.query(hyp);

    IterationRecord rec;
    rec.iteration = stats.eq_count;
    if (!answer) {
      result.termination = Termination::oracle_yes;
      rec.branch = Branch::yes;
      rec.horn_size = st.horn.size();
      rec.quasi_size = st.quasi.size();
      if (options.observer) options.observer(rec);
      break;
    }
    const Model& x = *answer;
    if (x.width() != width) throw ProtocolError("counterexample has wrong width", to_bitstring(x));
    rec.counterexample = x;

    if (!satisfies(x, hyp)) {
      ++stats.pos_counterexamples;
      st.positives.insert(x);
      rec.branch = Branch::positive;
    } else {
      ++stats.neg_counterexamples;
      bool refined = false;
      for (std::size_t i = 0; i < st.negatives.size(); ++i) {
        Model y = x & st.negatives[i];
        // The hypothesis test is free, so it goes before the MQ.
        if (!satisfies(y, hyp)) continue;
        ++stats.mq_count;
        if (membership.query(y) != Label::negative) continue;
        if (!y.is_strict_subset_of(st.negatives[i])) {
          result.invariant_violations.push_back("refinement of " + to_bitstring(st.negatives[i]) +
                                                " did not shrink it");
        }
        st.negatives[i] = std::move(y);
        ++stats.replacements;
        rec.branch = Branch::replace;
        rec.position = i;
        refined = true;
        break;
      }
      if (!refined) {
        if (!ever_appended.insert(x).second) ++stats.repeated_appends;
        st.negatives.push_back(x);
        ++stats.appends;
        rec.branch = Branch::append;
        rec.position = st.negatives.size() - 1;
      }
    }

    rec.promoted = promote_non_horn(st);
    stats.promotions += rec.promoted.size();
    rebuild_hypothesis(st);
    rec.horn_size = st.horn.size();
    rec.quasi_size = st.quasi.size();

    if (options.check_invariants) {
      for (auto& msg : check_state_invariants(st)) {
        result.invariant_violations.push_back("EQ " + std::to_string(stats.eq_count) + ": " + msg);
      }
    }
    if (options.observer) options.observer(rec);
  }

  stats.k_observed = st.nonhorn.size();
  result.horn = st.horn;
  result.quasi = quasi_clauses(st.quasi);
  return result;
}

namespace {

std::vector<MetaClause> classic_clauses(const std::vector<Model>& negatives, std::size_t width) {
  std::vector<MetaClause> h;
  for (const auto& e : negatives) {
    for (std::size_t p = 0; p < width; ++p) {
      if (!e.test(p)) h.push_back(MetaClause::implies(e, Model(width, {p})));
    }
    h.push_back(MetaClause::bottom(e));
  }
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  return h;
}

}  // namespace

LearnerResult learn_classic_horn(MembershipSession& membership, EquivalenceOracle& equivalence,
                                 std::size_t width, std::size_t max_iterations,
                                 const IterationObserver& observer) {
  if (membership.width() != width) throw UsageError("membership oracle width mismatch");

  LearnerResult result;
  result.state = LearnerState(width);
  LearnerState& st = result.state;
  LearnerStats& stats = result.stats;
  std::unordered_set<Model, ModelHash> ever_appended;

  for (;;) {
    if (stats.eq_count >= max_iterations) {
      result.termination = Termination::budget_exhausted;
      break;
    }
    const Hypothesis hyp = st.hypothesis();
    ++stats.eq_count;
    const auto answer = equivalence.query(hyp);
    IterationRecord rec;
    rec.iteration = stats.eq_count;
    if (!answer) {
      result.termination = Termination::oracle_yes;
      rec.horn_size = st.horn.size();
      if (observer) observer(rec);
      break;
    }
    const Model& x = *answer;
    rec.counterexample = x;

    if (!satisfies(x, st.horn)) {
      ++stats.pos_counterexamples;
      std::erase_if(st.horn, [&](const MetaClause& c) { return !satisfies(x, c); });
      rec.branch = Branch::positive;
    } else {
      ++stats.neg_counterexamples;
      bool refined = false;
      for (std::size_t i = 0; i < st.negatives.size(); ++i) {
        Model y = x & st.negatives[i];
        if (!y.is_strict_subset_of(st.negatives[i])) continue;
        ++stats.mq_count;
        if (membership.query(y) != Label::negative) continue;
        st.negatives[i] = std::move(y);
        ++stats.replacements;
        rec.branch = Branch::replace;
        rec.position = i;
        refined = true;
        break;
      }
      if (!refined) {
        if (!ever_appended.insert(x).second) ++stats.repeated_appends;
        st.negatives.push_back(x);
        ++stats.appends;
        rec.branch = Branch::append;
        rec.position = st.negatives.size() - 1;
      }
      st.horn = classic_clauses(st.negatives, width);
    }
    rec.horn_size = st.horn.size();
    if (observer) observer(rec);
  }

  result.horn = st.horn;
  return result;
}

ScriptedEquivalence::ScriptedEquivalence(std::vector<std::optional<Model>> script, bool cycle,
                                         std::optional<Formula> reference)
    : script_(std::move(script)), cycle_(cycle), reference_(std::move(reference)) {}

std::optional<Model> ScriptedEquivalence::answer(const Hypothesis& hyp) {
  if (next_ >= script_.size()) {
    if (!cycle_ || script_.empty()) throw Error("equivalence script exhausted");
    next_ = 0;
  }
  const auto& step = script_[next_++];
  if (step && reference_ && satisfies(*step, hyp) == satisfies(*step, *reference_)) {
    warnings_.push_back("scripted counterexample " + to_bitstring(*step) +
                        " does not separate hypothesis and target");
  }
  return step;
}

BoundCheck check_bounds(const LearnerResult& result, std::size_t env_size, std::size_t k,
                        std::size_t width) {
  BoundCheck b;
  b.counterexample_limit = (width + 1) * (env_size + k);
  b.membership_limit = (env_size + k) * b.counterexample_limit;
  const auto& s = result.stats;
  b.ok = s.neg_counterexamples <= b.counterexample_limit &&
         s.pos_counterexamples <= b.counterexample_limit && s.mq_count <= b.membership_limit;
  return b;
}

bool assert_bounds(const LearnerResult& result, std::size_t env_size, std::size_t k,
                   std::size_t width) {
  return check_bounds(result, env_size, k, width).ok;
}

}  // namespace hornenv
