#include "hornenv/reduction.hpp"

#include "hornenv/errors.hpp"
#include "hornenv/logic.hpp"

namespace hornenv {

ExtendedUniverse::ExtendedUniverse(VariableUniverse base) : base_(std::move(base)) {
  for (const auto& n : base_.names()) combined_.add(n);
  for (const auto& n : base_.names()) {
    std::string d = n + std::string(kDualSuffix);
    if (combined_.index_of(d)) throw ConfigError("dual name '" + d + "' clashes with a base variable");
    combined_.add(std::move(d));
  }
}

std::size_t ExtendedUniverse::dual(std::size_t i) const {
  const std::size_t n = base_size();
  if (i >= 2 * n) throw UsageError("variable index out of range");
  return i < n ? i + n : i - n;
}

Formula EncodedFormula::combined() const {
  Formula f = phi_neg;
  for (const auto& c : chi_setup.clauses()) f.add(c);
  return f;
}

namespace {

std::size_t base_width(const Model& x) {
  if (x.width() % 2 != 0) throw UsageError("extended model must have even width");
  return x.width() / 2;
}

}  // namespace

EncodedFormula encode_formula(const Formula& phi) {
  const std::size_t n = phi.width();
  EncodedFormula out{Formula(2 * n), Formula(2 * n)};
  for (const auto& c : phi.clauses()) {
    Model ant(2 * n);
    for (auto p : c.antecedent.indices()) ant.set(p);
    for (auto q : c.consequent.indices()) ant.set(q + n);
    out.phi_neg.add(Clause(std::move(ant), Model(2 * n)));
  }
  for (std::size_t v = 0; v < n; ++v) {
    out.chi_setup.add(Clause(Model(2 * n, {v, v + n}), Model(2 * n)));
  }
  for (std::size_t v = 0; v < n; ++v) {
    out.chi_setup.add(Clause(Model(2 * n), Model(2 * n, {v, v + n})));
  }
  return out;
}

Formula encode(const Formula& phi) { return encode_formula(phi).combined(); }

Model encode_model(const Model& x) {
  const std::size_t n = x.width();
  Model out(2 * n);
  for (std::size_t v = 0; v < n; ++v) out.set(x.test(v) ? v : v + n);
  return out;
}

std::optional<Model> decode_model(const Model& x) {
  const std::size_t n = base_width(x);
  Model y(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (x.test(v) == x.test(v + n)) return std::nullopt;
    if (x.test(v)) y.set(v);
  }
  return y;
}

Formula decode_formula(const Formula& psi) {
  const std::size_t n = psi.width() / 2;
  if (psi.width() % 2 != 0) throw UsageError("extended formula must have even width");
  Formula out(n);
  for (const auto& c : psi.clauses()) {
    Model ant(n);
    Model con(n);
    for (auto i : c.antecedent.indices()) (i < n ? ant : con).set(i < n ? i : i - n);
    for (auto i : c.consequent.indices()) (i < n ? con : ant).set(i < n ? i : i - n);
    out.add(Clause(std::move(ant), std::move(con)));
  }
  return out;
}

Formula explicit_envelope(const Formula& phi) {
  const std::size_t n = phi.width();
  const Formula phi_neg = encode_formula(phi).phi_neg;
  Formula out = phi_neg;
  for (std::size_t v = 0; v < n; ++v) out.add(Clause(Model(2 * n, {v, v + n}), Model(2 * n)));
  for (const auto& h : phi_neg.clauses()) {
    for (auto p : h.antecedent.indices()) {
      Model ant = h.antecedent;
      ant.reset(p);
      out.add(Clause(std::move(ant), Model(2 * n, {p < n ? p + n : p - n})));
    }
  }
  return out;
}

namespace {

// MQ_{enc(φ)} answered from MQ_φ.
class LiftedMembership final : public MembershipOracle {
 public:
  explicit LiftedMembership(MembershipSession& base) : base_(&base) {}

  std::size_t width() const override { return 2 * base_->width(); }
  Label classify(const Model& x) override {
    auto y = decode_model(x);
    if (!y) return Label::negative;
    return base_->query(*y);
  }

 private:
  MembershipSession* base_;
};

// EQ^Horn_{enc(φ)}(ψ) answered from EQ_φ(dec(ψ)).
class LiftedEquivalence final : public EquivalenceOracle {
 public:
  LiftedEquivalence(ExactCnfEquivalence& base, MembershipSession& membership,
                    std::vector<LiftedCounterexample>& log)
      : base_(&base), membership_(&membership), log_(&log) {}

  EquivalenceMode mode() const override { return EquivalenceMode::exact; }
  const Formula& last_decoded() const noexcept { return decoded_; }

 protected:
  std::optional<Model> answer(const Hypothesis& hyp) override {
    const Formula psi = to_formula(hyp);
    decoded_ = decode_formula(psi);
    auto x = base_->query(decoded_);
    if (!x) return std::nullopt;
    LiftedCounterexample rec{*x, encode_model(*x)};
    rec.negative = membership_->query(*x) == Label::negative;
    rec.horn_negative = rec.negative && satisfies(rec.lifted, psi);
    log_->push_back(rec);
    return rec.lifted;
  }

 private:
  ExactCnfEquivalence* base_;
  MembershipSession* membership_;
  std::vector<LiftedCounterexample>* log_;
  Formula decoded_;
};

}  // namespace

CnfLearnResult learn_cnf_via_envelope(MembershipOracle& membership,
                                      ExactCnfEquivalence& equivalence,
                                      const VariableUniverse& vars,
                                      const LearnerOptions& options) {
  if (membership.width() != vars.size()) throw UsageError("membership oracle width mismatch");
  CnfLearnResult out;
  MembershipSession base_session(membership);
  LiftedMembership lifted(base_session);
  MembershipSession lifted_session(lifted);
  LiftedEquivalence eq(equivalence, base_session, out.counterexamples);

  out.learner = learn_envelope(lifted_session, eq, 2 * vars.size(), options);
  out.converged = out.learner.termination == Termination::oracle_yes;
  out.formula = eq.last_decoded();
  return out;
}

}  // namespace hornenv
