#include <doctest.h>

#include <random>

#include "hornenv/errors.hpp"
#include "hornenv/formula_io.hpp"
#include "hornenv/logic.hpp"
#include "hornenv/reduction.hpp"
#include "testlib.hpp"

using namespace hornenv;

namespace {

const VariableUniverse kAb({"a", "b"});

}  // namespace

TEST_CASE("extended universe") {
  const ExtendedUniverse u(kAb);
  CHECK(u.size() == 4);
  CHECK(u.combined().names() == std::vector<std::string>{"a", "b", "a_neg", "b_neg"});
  CHECK(u.dual(0) == 2);
  CHECK(u.dual(3) == 1);
  CHECK(u.is_dual(2));
  CHECK_FALSE(u.is_dual(1));
  CHECK_THROWS_AS(u.dual(4), UsageError);
  CHECK_THROWS_AS(ExtendedUniverse(VariableUniverse({"a", "a_neg"})), ConfigError);
}

TEST_CASE("encoding a single clause") {
  const ExtendedUniverse u(kAb);
  const auto enc = encode_formula(parse_formula("a -> b", kAb));
  CHECK(format_formula(enc.phi_neg, u.combined(), false) == "a b_neg ->\n");
  CHECK(format_formula(enc.chi_setup, u.combined(), false) ==
        "a a_neg ->\nb b_neg ->\n-> a a_neg\n-> b b_neg\n");
  CHECK(enc.phi_neg.is_horn());
  CHECK(enc.combined().size() == 5);
  CHECK(encode(parse_formula("a -> b", kAb)) == enc.combined());
}

TEST_CASE("model encoding round trip") {
  const Model x = parse_model("a", kAb);
  const Model lifted = encode_model(x);
  CHECK(lifted == Model(4, {0, 3}));
  CHECK(decode_model(lifted) == x);
  CHECK_FALSE(decode_model(Model(4, {0, 2})));  // a and a_neg together
  CHECK_FALSE(decode_model(Model(4, {0})));     // b undetermined
  CHECK_THROWS_AS(decode_model(Model(3)), UsageError);
}

TEST_CASE("decoding moves duals across the arrow") {
  const ExtendedUniverse u(kAb);
  const Formula psi = parse_formula("a b_neg ->\na_neg -> b\n", u.combined());
  CHECK(format_formula(decode_formula(psi), kAb, false) == "a -> b\n-> a b\n");
}

TEST_CASE("encoding preserves satisfaction and decoding retracts it") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const Formula phi = testlib::random_formula(rng, n);
    const auto enc = encode_formula(phi);
    const Formula full = enc.combined();
    const Model x = testlib::model_of(n, rng() & ((1ULL << n) - 1));
    const Model lifted = encode_model(x);
    CHECK(satisfies(x, phi) == satisfies(lifted, full));
    CHECK(satisfies(x, phi) == satisfies(lifted, enc.phi_neg));
    CHECK(satisfies(lifted, enc.chi_setup));
    CHECK(equivalent(decode_formula(enc.phi_neg), phi));
  }
}

TEST_CASE("models of the encoding are exactly the lifted models") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const Formula phi = testlib::random_formula(rng, n);
    std::vector<Model> lifted;
    for (const auto& x : models_of(phi)) lifted.push_back(encode_model(x));
    CHECK(models_of(encode(phi)) == ModelSet(2 * n, lifted));
  }
}

TEST_CASE("explicit Horn envelope of the encoding is entailed by the true envelope") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const Formula phi = testlib::random_formula(rng, n);
    CAPTURE(format_formula(phi, testlib::letters(n)));
    const Formula big = explicit_envelope(phi);
    CHECK(big.is_horn());
    const ModelSet env = envelope_bruteforce(encode(phi));
    const ModelSet loose = models_of(big);
    for (const auto& m : env) CHECK(loose.contains(m));
  }
}

TEST_CASE("explicit Horn envelope of the encoding can be strictly weaker") {
  // φ ≡ b. The envelope of enc(φ) entails ⊤ → b, which needs two resolution
  // steps through a ∨ a_neg; the one-step clauses admit the empty model.
  const Formula phi = parse_formula("-> a b\na -> b\n", kAb);
  const ModelSet env = envelope_bruteforce(encode(phi));
  const ModelSet loose = models_of(explicit_envelope(phi));
  CHECK_FALSE(env.contains(Model(4)));
  CHECK(loose.contains(Model(4)));
  CHECK(loose.size() == env.size() + 1);
}

TEST_CASE("learning CNF through the envelope learner") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const Formula phi = testlib::random_formula(rng, n);
    const VariableUniverse vars = testlib::letters(n);
    CAPTURE(format_formula(phi, vars));
    FormulaOracle o(phi);
    ExactCnfEquivalence eq(phi);
    LearnerOptions opts;
    opts.check_invariants = true;
    const auto res = learn_cnf_via_envelope(o, eq, vars, opts);
    REQUIRE(res.converged);
    CHECK(equivalent(res.formula, phi));
    CHECK(res.learner.invariant_violations.empty());
    for (const auto& c : res.counterexamples) {
      CHECK(c.lifted == encode_model(c.base));
      CHECK(c.horn_negative == c.negative);
    }
  }
}

TEST_CASE("learning the nontermination target as a CNF") {
  const VariableUniverse vars({"a", "b", "c", "d"});
  const Formula phi = parse_formula("a ->\n-> b c\n", vars);
  FormulaOracle o(phi);
  ExactCnfEquivalence eq(phi);
  const auto res = learn_cnf_via_envelope(o, eq, vars);
  REQUIRE(res.converged);
  CHECK(equivalent(res.formula, phi));
  CHECK_THROWS_AS(learn_cnf_via_envelope(o, eq, kAb), UsageError);
}
