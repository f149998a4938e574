// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hornenv/formula_io.hpp"
#include "hornenv/harness.hpp"
#include "hornenv/learner.hpp"
#include "hornenv/logic.hpp"
#include "hornenv/reduction.hpp"
#include "hornenv/wire.hpp"
#include "testlib.hpp"

using namespace hornenv;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct SuiteTotals {
  std::size_t invariant_violations = 0;
  std::size_t bound_failures = 0;
  std::size_t runs = 0;
};

LearnerResult learn_exact(const Formula& target) {
  FormulaOracle o(target);
  MembershipSession s(o);
  ExactHornEquivalence eq(target);
  LearnerOptions opts;
  opts.check_invariants = true;
  return learn_envelope(s, eq, target.width(), opts);
}

void tally(SuiteTotals& t, const LearnerResult& r, const Formula& target) {
  const std::size_t k = closure(models_of(target)).size() - models_of(target).size();
  const auto b = check_bounds(r, r.horn.size(), k, target.width());
  ++t.runs;
  t.invariant_violations += r.invariant_violations.size();
  t.bound_failures += !b.ok;
}

void random_cnf_envelopes(SuiteTotals& totals) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::size_t wrong = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + rng() % 5;
    const Formula target = testlib::random_formula(rng, n, {1, 8, 3, false});
    const auto r = learn_exact(target);
    const bool ok = r.termination == Termination::oracle_yes &&
                    models_of(to_formula(n, r.horn)) == envelope_bruteforce(target) &&
                    is_saturated(r.horn, n);
    wrong += !ok;
    tally(totals, r, target);
  }
  const double secs = seconds_since(t0);
  report(wrong == 0 && secs < 300, "envelope-correctness",
         fmt("200 random CNFs over 4..8 vars, %zu wrong, %.1fs (limit 300s)", wrong, secs));
}

void nontermination_example(SuiteTotals& totals) {
  const auto t0 = Clock::now();
  const auto demo = demo_nontermination(30);
  const VariableUniverse vars({"a", "b", "c", "d"});
  const Formula expected = parse_formula("a ->", vars);
  const Formula learned = to_formula(4, demo.envelope.horn);
  const bool match = entails(learned, expected) && entails(expected, learned);
  const double secs = seconds_since(t0);
  tally(totals, demo.envelope, parse_formula("a ->\n-> b c\n", vars));
  report(demo.resets >= 9 && match && secs < 1.0, "classic-cycles-envelope-terminates",
         fmt("classic HORN reset %zu times in 30 EQs (need >= 9), envelope H equivalent to {a -> F}: %s, "
             "%.3fs (limit 1s)",
             demo.resets, match ? "yes" : "no", secs));
}

void horn_targets(SuiteTotals& totals) {
  std::mt19937_64 rng(77);
  std::size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + rng() % 6;
    const Formula target = testlib::random_formula(rng, n, {1, 8, 3, true});
    const auto r = learn_exact(target);
    bad += !(r.stats.k_observed == 0 && r.state.nonhorn.empty() && r.quasi.empty() &&
             equivalent(to_formula(n, r.horn), target));
    tally(totals, r, target);
  }
  report(bad == 0, "horn-targets",
         fmt("100 random Horn targets: %zu with nonempty Enh/Q or inequivalent output", bad));
}

void reduction_suite() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4242);
  std::size_t eq1 = 0;
  std::size_t retract = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const Formula phi = testlib::random_formula(rng, n);
    const Model x = testlib::model_of(n, rng() & ((1ULL << n) - 1));
    const Formula enc = encode(phi);
    eq1 += satisfies(x, phi) != satisfies(encode_model(x), enc);
    retract += !equivalent(decode_formula(encode_formula(phi).phi_neg), phi) ||
               decode_model(encode_model(x)) != x;
  }
  std::size_t envelope_bad = 0;
  std::string envelope_example;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const Formula phi = testlib::random_formula(rng, n);
    if (models_of(explicit_envelope(phi)) != envelope_bruteforce(encode(phi))) {
      if (envelope_bad++ == 0) envelope_example = format_formula(phi, testlib::letters(n), false);
    }
  }
  std::size_t learn = 0;
  std::size_t lift = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 5;
    const Formula phi = testlib::random_formula(rng, n);
    FormulaOracle o(phi);
    ExactCnfEquivalence eq(phi);
    const auto res = learn_cnf_via_envelope(o, eq, testlib::letters(n));
    learn += !(res.converged && equivalent(res.formula, phi));
    for (const auto& c : res.counterexamples) lift += c.negative != c.horn_negative;
  }
  const double secs = seconds_since(t0);
  report(eq1 + retract + envelope_bad + learn + lift == 0 && secs < 600, "reduction",
         fmt("satisfaction transfer %zu/500 bad, retraction %zu/500 bad, explicit envelope %zu/50 bad, "
             "CNF learning %zu/50 bad, lifted negatives not Horn-negative %zu, %.1fs (limit 600s)",
             eq1, retract, envelope_bad, learn, lift, secs));
  if (envelope_bad != 0) {
    std::string flat = envelope_example;
    for (auto& c : flat) c = c == '\n' ? ';' : c;
    std::printf("     first explicit-envelope mismatch: %s\n", flat.c_str());
  }
}

void planted_rules() {
  const std::string data = HORNENV_DATA_DIR;
  const auto schema = load_schema(data + "/biography_schema.json");
  const auto vars = schema_to_universe(schema);
  const std::string command = std::string(HORNENV_STUB_ORACLE) + " --target " + data +
                              "/planted_rules.txt --schema " + data + "/biography_schema.json";
  const std::vector<std::string> rules = {"priest & female -> F", "nurse & male -> F",
                                          "mathematician & female -> F", "footballer & female -> F",
                                          "banker & female -> F"};
  std::map<std::string, std::size_t> seeds_ok;
  std::string counts;
  std::size_t failed_runs = 0;
  for (std::uint64_t seed : {0, 100, 200, 300, 400}) {
    ExperimentConfig cfg;
    cfg.vars = vars;
    cfg.blocks = schema_blocks(schema);
    cfg.make_oracle = [&](std::size_t) { return external_oracle_connect(Endpoint::process(command), vars); };
    cfg.eq_budget = 100;
    cfg.batch_size = 640;
    cfg.iterations = 10;
    cfg.threshold = 7;
    cfg.seed = seed;
    const auto rep = run_experiment(cfg);
    failed_runs += rep.failed_iterations();
    counts += " seed " + std::to_string(seed) + ":";
    for (const auto& r : rules) {
      const std::size_t c = rep.count_of(r).value_or(0);
      counts += " " + std::to_string(c);
      if (c >= 7) ++seeds_ok[r];
    }
  }
  bool ok = failed_runs == 0;
  for (const auto& r : rules) ok = ok && seeds_ok[r] >= 3;
  report(ok, "planted-rules",
         "counts /10 per rule in order priest, nurse, mathematician, footballer, banker;" + counts +
             fmt("; need >= 7 in >= 3 of 5 seeds; %zu failed runs", failed_runs));
}

}  // namespace

int main() {
  SuiteTotals totals;
  random_cnf_envelopes(totals);
  nontermination_example(totals);
  horn_targets(totals);
  report(totals.bound_failures == 0 && totals.invariant_violations == 0, "query-bounds",
         fmt("%zu runs, %zu exceed (|V|+1)(|env|+k) counterexamples or (|env|+k)^2(|V|+1) MQs, "
             "%zu invariant violations",
             totals.runs, totals.bound_failures, totals.invariant_violations));
  reduction_suite();
  planted_rules();
  report(totals.invariant_violations == 0, "invariants",
         fmt("%zu invariant violations across %zu checked runs", totals.invariant_violations, totals.runs));
  return failures == 0 ? 0 : 1;
}
