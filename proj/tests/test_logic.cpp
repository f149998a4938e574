#include <doctest.h>

#include <random>

#include "hornenv/errors.hpp"
#include "hornenv/formula_io.hpp"
#include "hornenv/logic.hpp"
#include "testlib.hpp"

using namespace hornenv;
using testlib::Mask;

namespace {

const VariableUniverse kAbcd({"a", "b", "c", "d"});

Model M(std::string_view names) { return parse_model(names, kAbcd); }
Formula F(std::string_view text) { return parse_formula(text, kAbcd); }

// a -> F ; b | c
Formula cycling() { return F("a ->\n-> b c\n"); }

}  // namespace

TEST_CASE("clause evaluation") {
  CHECK_FALSE(satisfies(M("a"), F("a ->").clauses()[0]));
  CHECK(satisfies(M(""), F("a -> b").clauses()[0]));
  CHECK_FALSE(satisfies(M("d"), F("-> b c").clauses()[0]));
  CHECK_THROWS_AS(satisfies(Model(3), F("a -> b").clauses()[0]), UsageError);
}

TEST_CASE("metaclause evaluation") {
  const auto p_q = MetaClause::implies(M("a"), M("b"));
  CHECK(satisfies(M("a b"), p_q));
  CHECK_FALSE(satisfies(M("a"), p_q));
  CHECK_FALSE(satisfies(M("a"), MetaClause::bottom(M("a"))));
  CHECK(satisfies(M("b"), MetaClause::bottom(M("a"))));
  // ⋀{a} → ⋀{b,c} needs both.
  CHECK_FALSE(satisfies(M("a b"), MetaClause::implies(M("a"), M("b c"))));
  CHECK(satisfies(M("a b c"), MetaClause::implies(M("a"), M("b c"))));
}

TEST_CASE("hypothesis evaluation") {
  Hypothesis empty{4, {}, {}};
  for (Mask x = 0; x < 16; ++x) CHECK(satisfies(testlib::model_of(4, x), empty));
  Hypothesis h{4, {MetaClause::implies(M("d"), M("b"))}, {}};
  CHECK_FALSE(satisfies(M("c d"), h));
  Hypothesis q{4, {}, {M("d")}};
  CHECK_FALSE(satisfies(M("d"), q));
  CHECK(satisfies(M("c d"), q));
  // The stored quasi model agrees with the explicit quasi clause.
  for (Mask x = 0; x < 16; ++x) {
    const Model m = testlib::model_of(4, x);
    CHECK(satisfies(m, q) == satisfies(m, make_quasi(M("d"))));
  }
}

TEST_CASE("intersection") {
  CHECK(intersect(M("a b"), M("b c")) == M("b"));
  CHECK(intersect(M("a c"), M("a c")) == M("a c"));
  CHECK(intersect(M("a"), M("b")) == M(""));
}

TEST_CASE("closure examples") {
  CHECK(closure(ModelSet(4)).empty());
  const ModelSet c = closure(ModelSet(4, {M("a b"), M("b c")}));
  CHECK(c == ModelSet(4, {M("a b"), M("b c"), M("b")}));
  CHECK(closure(ModelSet(4, {M("b d"), M("c d")})).contains(M("d")));
}

TEST_CASE("models_of examples") {
  CHECK(models_of(Formula(2)).size() == 4);
  const ModelSet m = models_of(cycling());
  CHECK(m == ModelSet(4, {M("b"), M("c"), M("b c"), M("b d"), M("c d"), M("b c d")}));

  const VariableUniverse aa({"a", "a_neg"});
  const Formula chi = parse_formula("a a_neg ->\n-> a a_neg\n", aa);
  CHECK(models_of(chi) == ModelSet(2, {Model(2, {0}), Model(2, {1})}));
  CHECK_THROWS_AS(models_of(Formula(21)), CapExceeded);
  CHECK_THROWS_AS(models_of(Formula(21), 40), UsageError);
}

TEST_CASE("intersection-closed examples") {
  CHECK(is_intersection_closed(ModelSet(4)));
  CHECK_FALSE(is_intersection_closed(ModelSet(4, {M("a"), M("b")})));
}

TEST_CASE("make_horn examples") {
  const auto h0 = make_horn(ModelSet(4), M("d"));
  CHECK(h0.negative);
  CHECK(h0.antecedent == M("d"));
  const auto h1 = make_horn(ModelSet(4, {M("b d")}), M("d"));
  CHECK_FALSE(h1.negative);
  CHECK(h1.consequent == M("b"));
  const auto h2 = make_horn(ModelSet(4, {M("b d"), M("c d")}), M("d"));
  CHECK_FALSE(h2.negative);
  CHECK(h2.consequent.none());
  // A positive example equal to x is not a strict superset.
  CHECK(make_horn(ModelSet(4, {M("d")}), M("d")).negative);
}

TEST_CASE("make_quasi examples") {
  const VariableUniverse ab({"a", "b"});
  const Clause q0 = make_quasi(Model(2));
  CHECK(q0.antecedent.none());
  CHECK(q0.consequent == Model::full(2));
  const Clause q1 = make_quasi(M("d"));
  CHECK(q1.consequent == M("a b c"));
  const Clause q2 = make_quasi(Model::full(4));
  CHECK(q2.consequent.none());
}

TEST_CASE("consequence_closure examples") {
  CHECK(consequence_closure(F("a -> b"), M("a")) == M("b"));
  CHECK(consequence_closure(F("a -> b\nb -> c"), M("a")) == M("b c"));
  CHECK(consequence_closure(cycling(), Model::full(4)).none());
}

TEST_CASE("saturation examples") {
  CHECK(is_saturated({}, 4));
  CHECK_FALSE(is_saturated({MetaClause::implies(M("a"), M("b")), MetaClause::implies(M("a"), M("c"))}, 4));
  CHECK(is_saturated({MetaClause::implies(M("a"), M("b c"))}, 4));
  CHECK(is_saturated({MetaClause::bottom(M("a"))}, 4));
  // Consequent not maximal: a → b together with b → c entails a → c.
  CHECK_FALSE(is_saturated({MetaClause::implies(M("a"), M("b")), MetaClause::implies(M("b"), M("c"))}, 4));
  CHECK(is_saturated({MetaClause::implies(M("a"), M("b c")), MetaClause::implies(M("b"), M("c"))}, 4));
}

TEST_CASE("envelope examples") {
  const ModelSet env = envelope_bruteforce(cycling());
  CHECK(env == models_of(F("a ->")));
  CHECK(env.size() == 8);
  const Formula horn = F("a -> b\nb c -> d");
  CHECK(envelope_bruteforce(horn) == models_of(horn));
}

TEST_CASE("entailment examples") {
  CHECK(entails(cycling(), cycling()));
  CHECK(entails(cycling(), F("a ->")));
  CHECK_FALSE(entails(F("a -> b"), F("b -> a")));
  CHECK(equivalent(F("a -> b c\na -> c"), F("a -> c")));
}

TEST_CASE("to_formula expands metaclauses") {
  const Formula f = to_formula(4, {MetaClause::implies(M("a"), M("b c")), MetaClause::bottom(M("d"))});
  CHECK(f.size() == 3);
  CHECK(f.is_horn());
  Hypothesis hyp{4, {MetaClause::bottom(M("a"))}, {M("d")}};
  const Formula g = to_formula(hyp);
  CHECK(g.size() == 2);
  CHECK_FALSE(g.is_horn());
  for (Mask x = 0; x < 16; ++x) {
    const Model m = testlib::model_of(4, x);
    CHECK(satisfies(m, g) == satisfies(m, hyp));
  }
}

// ---- properties against the naive references --------------------------

TEST_CASE("models_of and closure agree with naive enumeration") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 9;
    const Formula f = testlib::random_formula(rng, n);
    const auto mods = testlib::naive_models(f);
    CHECK(testlib::masks_of(models_of(f)) == mods);
    CHECK(testlib::masks_of(closure(models_of(f))) == testlib::naive_closure(mods));
  }
}

TEST_CASE("closure matches on wide models (generic path)") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<Model> wide;
    std::set<Mask> naive;
    for (int i = 0; i < 7; ++i) {
      Mask bits = rng() & rng();
      Model m(70);
      for (std::size_t b = 0; b < 64; ++b) {
        if ((bits >> b) & 1U) m.set(b + 6);
      }
      wide.push_back(m);
      naive.insert(bits);
    }
    const ModelSet c = closure(ModelSet(70, wide));
    CHECK(c.size() == testlib::naive_closure(naive).size());
    CHECK(is_intersection_closed(c));
  }
}

TEST_CASE("a falsified Horn clause stays falsified under intersection") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 2 + rng() % 10;
    const Formula h = testlib::random_formula(rng, n, {1, 1, 4, true});
    const Clause& c = h.clauses()[0];
    const Model x = testlib::model_of(n, rng() & ((Mask{1} << n) - 1));
    Model y = testlib::model_of(n, rng() & ((Mask{1} << n) - 1)) | c.antecedent;
    if (satisfies(x, c)) continue;
    CHECK_FALSE(satisfies(intersect(x, y), c));
  }
}

TEST_CASE("closure is idempotent, extensive and minimal") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + rng() % 8;
    const std::size_t k = 1 + rng() % 8;
    std::vector<Model> ms;
    for (std::size_t i = 0; i < k; ++i) ms.push_back(testlib::model_of(n, rng() & ((Mask{1} << n) - 1)));
    const ModelSet m(n, ms);
    const ModelSet c = closure(m);
    CHECK(closure(c) == c);
    for (const auto& x : m) CHECK(c.contains(x));
    // Every member of the closure is the meet of the members of M above it,
    // so any intersection-closed superset of M must contain it.
    for (const auto& x : c) {
      Model meet = Model::full(n);
      for (const auto& y : m) {
        if (x.is_subset_of(y)) meet &= y;
      }
      CHECK(meet == x);
    }
  }
}

TEST_CASE("Horn models are intersection-closed, non-closed sets have a witness pair") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 7;
    const Formula horn = testlib::random_formula(rng, n, {1, 6, 3, true});
    CHECK(is_intersection_closed(models_of(horn)));
    const Formula any = testlib::random_formula(rng, n);
    const ModelSet mods = models_of(any);
    if (!is_intersection_closed(mods)) {
      bool witness = false;
      for (const auto& x : mods) {
        for (const auto& y : mods) witness = witness || !mods.contains(x & y);
      }
      CHECK(witness);
    }
  }
}

TEST_CASE("quasi clause has exactly one countermodel") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 8;
    const Model x = testlib::model_of(n, rng() & ((Mask{1} << n) - 1));
    const Clause q = make_quasi(x);
    std::size_t falsifying = 0;
    for (Mask y = 0; y < (Mask{1} << n); ++y) {
      if (!satisfies(testlib::model_of(n, y), q)) {
        ++falsifying;
        CHECK(testlib::model_of(n, y) == x);
      }
    }
    CHECK(falsifying == 1);
  }
}

TEST_CASE("make_horn is falsified by x and satisfied by every positive") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng() % 9;
    const Mask all = (Mask{1} << n) - 1;
    const Model x = testlib::model_of(n, rng() & all);
    std::vector<Model> pos;
    for (int i = 0; i < 4; ++i) {
      const Model e = testlib::model_of(n, rng() & all) | x;
      if (e != x) pos.push_back(e);
    }
    for (int i = 0; i < 3; ++i) pos.push_back(testlib::model_of(n, rng() & all));
    const ModelSet e_pos(n, pos);
    const MetaClause h = make_horn(e_pos, x);
    if (!h.negative && h.consequent.none()) continue;  // promotion case
    CHECK_FALSE(satisfies(x, h));
    for (const auto& e : e_pos) {
      if (e != x) CHECK(satisfies(e, h));
    }
  }
}

TEST_CASE("envelope equals the models of every entailed Horn clause") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng() % 5;
    const Formula f = testlib::random_formula(rng, n);
    const auto mods = testlib::naive_models(f);
    Formula entailed(n);
    for (Mask ant = 0; ant < (Mask{1} << n); ++ant) {
      for (std::size_t q = 0; q <= n; ++q) {
        const Mask con = q == n ? 0 : Mask{1} << q;
        if (q < n && ((ant >> q) & 1U)) continue;
        bool holds = true;
        for (Mask x : mods) {
          if ((ant & ~x) == 0 && (con & x) == 0) holds = false;
        }
        if (holds) entailed.add(Clause(testlib::model_of(n, ant), testlib::model_of(n, con)));
      }
    }
    CHECK(envelope_bruteforce(f) == models_of(entailed));
  }
}

TEST_CASE("consequence_closure agrees with forward chaining on Horn formulas") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 7;
    const Formula h = testlib::random_formula(rng, n, {1, 6, 3, true});
    const Mask all = (Mask{1} << n) - 1;
    const Mask x = rng() & all;
    // Forward chaining; deriving ⊥ makes every variable a consequence.
    Mask cur = x;
    bool bottom = false;
    for (bool changed = true; changed && !bottom;) {
      changed = false;
      for (const auto& c : h.clauses()) {
        const Mask p = testlib::mask_of(c.antecedent);
        if ((p & ~cur) != 0) continue;
        const Mask q = testlib::mask_of(c.consequent);
        if (q == 0) {
          bottom = true;
          break;
        }
        if ((cur & q) == 0) {
          cur |= q;
          changed = true;
        }
      }
    }
    const Mask expected = (bottom ? all : cur) & ~x;
    CHECK(testlib::mask_of(consequence_closure(h, testlib::model_of(n, x))) == expected);
  }
}
