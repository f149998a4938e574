#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "hornenv/errors.hpp"
#include "hornenv/formula_io.hpp"
#include "hornenv/harness.hpp"
#include "hornenv/learner.hpp"
#include "hornenv/logic.hpp"
#include "hornenv/oracle.hpp"
#include "hornenv/reduction.hpp"
#include "hornenv/wire.hpp"

using namespace hornenv;

namespace {

struct OracleFlags {
  std::string target;
  std::string oracle_cmd;
  std::string oracle_tcp;
  std::string schema;
  std::string eq_mode;
  std::optional<std::size_t> eq_budget;
  std::size_t batch = 640;
  std::uint64_t seed = 0;
  bool final_exact_check = false;
};

void add_oracle_flags(CLI::App* cmd, OracleFlags& f) {
  auto* t = cmd->add_option("--target", f.target, "target formula file (in-process oracle)")
                ->check(CLI::ExistingFile);
  auto* c = cmd->add_option("--oracle-cmd", f.oracle_cmd, "external oracle command (stdio)");
  auto* p = cmd->add_option("--oracle-tcp", f.oracle_tcp, "external oracle at HOST:PORT");
  t->excludes(c)->excludes(p);
  c->excludes(p);
  cmd->add_option("--schema", f.schema, "attribute schema JSON")->check(CLI::ExistingFile);
  cmd->add_option("--eq-mode", f.eq_mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_option("--eq-budget", f.eq_budget, "maximum number of equivalence queries");
  cmd->add_option("--batch", f.batch, "sampled EQ batch size");
  cmd->add_option("--seed", f.seed, "sampler seed");
  cmd->add_flag("--final-exact-check", f.final_exact_check,
                "after a clean sampled batch, compare against the whole sample space");
}

struct Setup {
  VariableUniverse vars;
  std::vector<SampleBlock> blocks;
  std::optional<Formula> target;
  std::function<std::unique_ptr<MembershipOracle>(std::size_t)> make_oracle;
  EqMode mode = EqMode::sampled;
  std::optional<std::size_t> budget;
};

Setup resolve(const OracleFlags& f) {
  Setup s;
  if (f.target.empty() && f.oracle_cmd.empty() && f.oracle_tcp.empty()) {
    throw UsageError("one of --target, --oracle-cmd, --oracle-tcp is required");
  }
  std::optional<AttributeSchema> schema;
  if (!f.schema.empty()) {
    schema = load_schema(f.schema);
    s.vars = schema_to_universe(*schema);
    s.blocks = schema_blocks(*schema);
  }
  if (!f.target.empty()) {
    const std::string text = read_text_file(f.target);
    if (schema) {
      s.target = parse_formula(text, s.vars);
    } else {
      auto parsed = parse_formula(text);
      s.vars = parsed.vars;
      s.target = parsed.formula;
    }
    const Formula target = *s.target;
    s.make_oracle = [target](std::size_t) { return std::make_unique<FormulaOracle>(target); };
  } else {
    if (!schema) throw UsageError("an external oracle needs --schema to fix the variable universe");
    const Endpoint ep = f.oracle_cmd.empty() ? Endpoint::parse_tcp(f.oracle_tcp) : Endpoint::process(f.oracle_cmd);
    const VariableUniverse vars = s.vars;
    s.make_oracle = [ep, vars](std::size_t) -> std::unique_ptr<MembershipOracle> {
      return external_oracle_connect(ep, vars);
    };
  }
  if (f.eq_mode.empty()) {
    s.mode = s.target && s.vars.size() <= kDefaultBruteForceCap ? EqMode::exact : EqMode::sampled;
  } else {
    s.mode = f.eq_mode == "exact" ? EqMode::exact : EqMode::sampled;
  }
  if (s.mode == EqMode::exact && !s.target) throw UsageError("--eq-mode exact needs --target");
  s.budget = f.eq_budget;
  if (s.mode == EqMode::sampled && !s.budget) s.budget = 100;
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

int cmd_learn(const OracleFlags& f, bool include_quasi, const std::string& out_path,
              const std::string& log_path) {
  const Setup s = resolve(f);
  auto oracle = s.make_oracle(0);
  MembershipSession session(*oracle);
  std::unique_ptr<EquivalenceOracle> eq;
  if (s.mode == EqMode::exact) {
    eq = std::make_unique<ExactHornEquivalence>(*s.target);
  } else {
    SamplerConfig sc;
    sc.batch_size = f.batch;
    sc.seed = f.seed;
    sc.space = s.blocks.empty() ? SampleSpace::all_subsets : SampleSpace::one_hot_groups;
    sc.blocks = s.blocks;
    sc.final_exact_check = f.final_exact_check;
    eq = std::make_unique<SampledEquivalence>(session, sc);
  }
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::binary);
    if (!log) throw ConfigError("cannot write '" + log_path + "'");
  }
  LearnerOptions opts;
  opts.eq_budget = s.budget;
  if (log.is_open()) {
    opts.observer = [&](const IterationRecord& rec) { log << iteration_record_json(rec, s.vars) << '\n'; };
  }
  const LearnerResult r = learn_envelope(session, *eq, s.vars.size(), opts);

  std::string text;
  for (const auto& m : r.horn) text += render_rule(m, s.vars) + "\n";
  if (include_quasi) {
    for (const auto& c : r.quasi) text += "quasi: " + format_clause(c, s.vars) + "\n";
  }
  std::cout << text;
  std::cerr << "termination=" << to_string(r.termination) << " eq=" << r.stats.eq_count
            << " mq=" << r.stats.mq_count << " neg=" << r.stats.neg_counterexamples
            << " pos=" << r.stats.pos_counterexamples << " k=" << r.stats.k_observed << '\n';
  if (!out_path.empty()) write_file(out_path, format_metaformula(r.horn, s.vars));
  return 0;
}

int cmd_experiment(const OracleFlags& f, std::size_t iterations, std::size_t threshold,
                   std::size_t parallel, const std::string& out_path) {
  const Setup s = resolve(f);
  ExperimentConfig cfg;
  cfg.vars = s.vars;
  cfg.blocks = s.blocks;
  cfg.make_oracle = s.make_oracle;
  cfg.target = s.target;
  cfg.eq_mode = s.mode;
  cfg.eq_budget = s.budget;
  cfg.batch_size = f.batch;
  cfg.iterations = iterations;
  cfg.seed = f.seed;
  cfg.parallelism = parallel;
  cfg.final_exact_check = f.final_exact_check;
  cfg.threshold = threshold;
  const RuleReport report = run_experiment(cfg);
  std::cout << report.to_text();
  if (!out_path.empty()) write_file(out_path, report.to_json());
  return report.failed_iterations() == iterations ? 1 : 0;
}

int cmd_closure(const std::string& target_path, const std::string& models_path) {
  if (!target_path.empty()) {
    const auto parsed = read_formula_file(target_path);
    const ModelSet mods = models_of(parsed.formula);
    const ModelSet env = closure(mods);
    std::cout << "models (" << mods.size() << "):\n";
    for (const auto& m : mods) std::cout << "  " << to_string(m, parsed.vars) << '\n';
    std::cout << "envelope (" << env.size() << "), non-Horn models marked *:\n";
    for (const auto& m : env) {
      std::cout << "  " << to_string(m, parsed.vars) << (mods.contains(m) ? "" : " *") << '\n';
    }
    std::cout << "k = " << env.size() - mods.size() << '\n';
    return 0;
  }
  // Model list: a "vars:" line followed by one model per line.
  const std::string text = read_text_file(models_path);
  std::istringstream in(text);
  std::string line;
  std::optional<VariableUniverse> vars;
  std::vector<Model> models;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!vars) {
      const auto at = line.find("vars:");
      if (at == std::string::npos) throw UsageError("model list must start with a 'vars:' line");
      VariableUniverse u;
      std::istringstream names(line.substr(at + 5));
      for (std::string n; names >> n;) u.add(n);
      vars = u;
      continue;
    }
    models.push_back(parse_model(line, *vars));
  }
  if (!vars) throw UsageError("empty model list");
  const ModelSet input(vars->size(), models);
  const ModelSet env = closure(input);
  for (const auto& m : env) std::cout << to_string(m, *vars) << (input.contains(m) ? "" : " *") << '\n';
  return 0;
}

int cmd_reduce(const std::string& target_path, bool learn) {
  const auto parsed = read_formula_file(target_path);
  const ExtendedUniverse ext(parsed.vars);
  std::cout << "# enc(phi)\n" << format_formula(encode(parsed.formula), ext.combined());
  std::cout << "# explicit Horn envelope\n"
            << format_formula(explicit_envelope(parsed.formula), ext.combined(), false);
  if (!learn) return 0;
  FormulaOracle mo(parsed.formula);
  ExactCnfEquivalence eq(parsed.formula);
  const CnfLearnResult r = learn_cnf_via_envelope(mo, eq, parsed.vars);
  std::cout << "# learned via the envelope learner (" << r.learner.stats.eq_count << " EQs)\n"
            << format_formula(r.formula, parsed.vars, false);
  const bool ok = r.converged && equivalent(r.formula, parsed.formula);
  std::cout << "# equivalent to target: " << (ok ? "yes" : "no") << '\n';
  return ok ? 0 : 1;
}

int cmd_demo(std::size_t cap) {
  const NonterminationDemo demo = demo_nontermination(cap);
  for (const auto& line : demo.transcript) std::cout << line << '\n';
  return demo.envelope_matches ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Horn envelope learning toolkit"};
  app.require_subcommand(1);

  OracleFlags learn_flags;
  bool include_quasi = false;
  std::string learn_out;
  std::string learn_log;
  auto* learn = app.add_subcommand("learn", "run the envelope learner once");
  add_oracle_flags(learn, learn_flags);
  learn->add_flag("--include-quasi", include_quasi, "also print the quasi clauses Q");
  learn->add_option("--out", learn_out, "write H in metaclause format");
  learn->add_option("--log", learn_log, "write a JSON-lines run log");

  OracleFlags exp_flags;
  std::size_t iterations = 10;
  std::size_t threshold = 7;
  std::size_t parallel = 1;
  std::string exp_out;
  auto* experiment = app.add_subcommand("experiment", "repeat the learner and count extracted rules");
  add_oracle_flags(experiment, exp_flags);
  experiment->add_option("--iterations", iterations, "independent runs (seed + i)");
  experiment->add_option("--threshold", threshold, "relevance threshold");
  experiment->add_option("--parallel", parallel, "concurrent runs");
  experiment->add_option("--out", exp_out, "write the report as JSON");

  std::string closure_target;
  std::string closure_models;
  auto* closure_cmd = app.add_subcommand("closure", "intersection closure of a model list or of mod(target)");
  auto* ct = closure_cmd->add_option("--target", closure_target, "formula file")->check(CLI::ExistingFile);
  auto* cm = closure_cmd->add_option("--models", closure_models, "model list file")->check(CLI::ExistingFile);
  ct->excludes(cm);
  closure_cmd->require_option(1);

  std::string reduce_target;
  bool reduce_learn = false;
  auto* reduce = app.add_subcommand("reduce", "CNF to Horn-envelope encoding");
  reduce->add_option("--target", reduce_target, "CNF file")->required()->check(CLI::ExistingFile);
  reduce->add_flag("--learn", reduce_learn, "recover the CNF through the envelope learner");

  std::size_t cap = 30;
  auto* demo = app.add_subcommand("demo-nontermination", "classic HORN cycling on a non-Horn target");
  demo->add_option("--cap", cap, "iteration cap for the classic algorithm");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*learn) return cmd_learn(learn_flags, include_quasi, learn_out, learn_log);
    if (*experiment) return cmd_experiment(exp_flags, iterations, threshold, parallel, exp_out);
    if (*closure_cmd) return cmd_closure(closure_target, closure_models);
    if (*reduce) return cmd_reduce(reduce_target, reduce_learn);
    if (*demo) return cmd_demo(cap);
  } catch (const UsageError& e) {
    std::cerr << "hornenv: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "hornenv: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
