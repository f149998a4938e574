#include "hornenv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hornenv/errors.hpp"
#include "hornenv/formula_io.hpp"
#include "hornenv/logic.hpp"

namespace hornenv {

using json = nlohmann::json;

AttributeSchema parse_schema(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("attributes") || !doc["attributes"].is_array()) {
    throw ConfigError("schema needs an \"attributes\" array");
  }
  AttributeSchema s;
  for (const auto& a : doc["attributes"]) {
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string() || !a.contains("values") ||
        !a["values"].is_array()) {
      throw ConfigError("each attribute needs a name and a values array");
    }
    Attribute attr;
    attr.name = a["name"].get<std::string>();
    for (const auto& v : a["values"]) {
      if (!v.is_string()) throw ConfigError("attribute '" + attr.name + "' has a non-string value");
      attr.values.push_back(v.get<std::string>());
    }
    attr.allow_unknown = a.value("allow_unknown", true);
    attr.label = a.value("label", false);
    s.attributes.push_back(std::move(attr));
  }
  return s;
}

AttributeSchema load_schema(const std::string& path) { return parse_schema(read_text_file(path)); }

VariableUniverse schema_to_universe(const AttributeSchema& schema) {
  VariableUniverse vars;
  std::set<std::string> attr_names;
  for (const auto& a : schema.attributes) {
    if (!attr_names.insert(a.name).second) throw ConfigError("duplicate attribute '" + a.name + "'");
    if (a.values.empty()) throw ConfigError("attribute '" + a.name + "' has no values");
    for (const auto& v : a.values) {
      if (v.empty()) throw ConfigError("attribute '" + a.name + "' has an empty value name");
      if (vars.index_of(v)) throw ConfigError("duplicate value name '" + v + "' in schema");
      vars.add(v);
    }
  }
  if (vars.empty()) throw ConfigError("schema declares no variables");
  return vars;
}

std::vector<SampleBlock> schema_blocks(const AttributeSchema& schema) {
  std::vector<SampleBlock> blocks;
  std::size_t next = 0;
  for (const auto& a : schema.attributes) {
    SampleBlock b;
    for (std::size_t i = 0; i < a.values.size(); ++i) b.variables.push_back(next++);
    b.allow_none = a.allow_unknown && !a.label;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

namespace {

std::string join(const Model& m, const VariableUniverse& vars) {
  std::string out;
  for (auto i : m.indices()) {
    if (!out.empty()) out += " & ";
    out += vars.name(i);
  }
  return out;
}

json model_names(const Model& m, const VariableUniverse& vars) {
  json arr = json::array();
  for (auto i : m.indices()) arr.push_back(vars.name(i));
  return arr;
}

}  // namespace

std::string render_rule(const MetaClause& m, const VariableUniverse& vars) {
  std::string out = join(m.antecedent, vars);
  out += out.empty() ? "-> " : " -> ";
  if (m.negative) {
    out += 'F';
  } else if (m.consequent.none()) {
    out += 'T';
  } else {
    out += join(m.consequent, vars);
  }
  return out;
}

std::string render_rule(const MetaClause& m, const AttributeSchema& schema) {
  return render_rule(m, schema_to_universe(schema));
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::positive: return "positive";
    case Branch::replace: return "replace";
    case Branch::append: return "append";
    case Branch::yes: return "yes";
  }
  return "?";
}

std::string_view to_string(Termination t) {
  return t == Termination::oracle_yes ? "oracle_yes" : "budget_exhausted";
}

std::string iteration_record_json(const IterationRecord& rec, const VariableUniverse& vars) {
  json j;
  j["iteration"] = rec.iteration;
  j["branch"] = to_string(rec.branch);
  j["counterexample"] = rec.counterexample ? model_names(*rec.counterexample, vars) : json(nullptr);
  j["position"] = rec.position ? json(*rec.position) : json(nullptr);
  json promoted = json::array();
  for (const auto& m : rec.promoted) promoted.push_back(model_names(m, vars));
  j["promoted"] = std::move(promoted);
  j["horn_size"] = rec.horn_size;
  j["quasi_size"] = rec.quasi_size;
  return j.dump();
}

void ExperimentConfig::validate() const {
  if (vars.empty()) throw ConfigError("experiment needs a non-empty variable universe");
  if (!make_oracle) throw ConfigError("experiment needs a membership oracle");
  if (iterations == 0) throw ConfigError("iterations must be at least 1");
  if (eq_mode == EqMode::sampled) {
    if (!eq_budget) throw ConfigError("sampled mode requires an EQ budget");
    if (batch_size == 0) throw ConfigError("sampled mode requires a positive batch size");
  } else {
    if (!target) throw ConfigError("exact mode requires a target formula");
    require_enumerable(vars.size(), kDefaultBruteForceCap);
  }
}

std::size_t RuleReport::failed_iterations() const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const RunOutcome& r) { return !r.ok; }));
}

std::vector<RuleCount> RuleReport::relevant() const {
  std::vector<RuleCount> out;
  for (const auto& r : rules) {
    if (r.count >= threshold) out.push_back(r);
  }
  return out;
}

std::optional<std::size_t> RuleReport::count_of(const std::string& text) const {
  for (const auto& r : rules) {
    if (r.text == text) return r.count;
  }
  return std::nullopt;
}

std::string RuleReport::to_text() const {
  std::ostringstream out;
  out << "rules extracted over " << iterations << " iterations (" << failed_iterations()
      << " failed), relevance threshold " << threshold << "\n\n";
  out << "count  rule\n";
  for (const auto& r : rules) {
    std::string count = std::to_string(r.count) + "/" + std::to_string(iterations);
    count.resize(std::max<std::size_t>(count.size(), 5), ' ');
    out << count << "  " << r.text << (r.count >= threshold ? "  *" : "") << '\n';
  }
  for (const auto& run : runs) {
    if (!run.ok) out << "iteration " << run.iteration << " failed: " << run.error << '\n';
  }
  return out.str();
}

std::string RuleReport::to_json() const {
  json j;
  j["iterations"] = iterations;
  j["threshold"] = threshold;
  json rs = json::array();
  for (const auto& r : rules) {
    rs.push_back({{"rule", r.text}, {"count", r.count}, {"relevant", r.count >= threshold}});
  }
  j["rules"] = std::move(rs);
  json runs_j = json::array();
  for (const auto& r : runs) {
    json rj{{"iteration", r.iteration}, {"seed", r.seed}, {"ok", r.ok}};
    if (!r.ok) {
      rj["error"] = r.error;
    } else {
      rj["termination"] = to_string(r.termination);
      rj["eq_count"] = r.stats.eq_count;
      rj["mq_count"] = r.stats.mq_count;
      rj["neg_counterexamples"] = r.stats.neg_counterexamples;
      rj["pos_counterexamples"] = r.stats.pos_counterexamples;
      rj["k_observed"] = r.stats.k_observed;
      rj["horn_size"] = r.horn.size();
    }
    runs_j.push_back(std::move(rj));
  }
  j["runs"] = std::move(runs_j);
  return j.dump(2) + "\n";
}

RuleReport aggregate(std::vector<RunOutcome> runs, const VariableUniverse& vars,
                     std::size_t iterations, std::size_t threshold) {
  std::sort(runs.begin(), runs.end(),
            [](const RunOutcome& a, const RunOutcome& b) { return a.iteration < b.iteration; });
  std::map<MetaClause, std::size_t> counts;
  for (const auto& run : runs) {
    if (!run.ok) continue;
    std::set<MetaClause> distinct(run.horn.begin(), run.horn.end());
    for (const auto& m : distinct) ++counts[m];
  }
  RuleReport report;
  report.iterations = iterations;
  report.threshold = threshold;
  for (const auto& [m, c] : counts) report.rules.push_back({m, render_rule(m, vars), c});
  std::sort(report.rules.begin(), report.rules.end(), [](const RuleCount& a, const RuleCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.text < b.text;
  });
  report.runs = std::move(runs);
  return report;
}

namespace {

RunOutcome run_once(const ExperimentConfig& cfg, std::size_t iteration) {
  RunOutcome out;
  out.iteration = iteration;
  out.seed = cfg.seed + iteration;
  try {
    auto oracle = cfg.make_oracle(iteration);
    if (!oracle || oracle->width() != cfg.vars.size()) throw ConfigError("oracle width mismatch");
    MembershipSession session(*oracle);

    std::unique_ptr<EquivalenceOracle> eq;
    if (cfg.eq_mode == EqMode::exact) {
      eq = std::make_unique<ExactHornEquivalence>(*cfg.target);
    } else {
      SamplerConfig sc;
      sc.batch_size = cfg.batch_size;
      sc.seed = out.seed;
      sc.space = cfg.blocks.empty() ? SampleSpace::all_subsets : SampleSpace::one_hot_groups;
      sc.blocks = cfg.blocks;
      sc.final_exact_check = cfg.final_exact_check;
      eq = std::make_unique<SampledEquivalence>(session, sc);
    }

    LearnerOptions opts;
    opts.eq_budget = cfg.eq_budget;
    if (cfg.collect_logs) {
      opts.observer = [&](const IterationRecord& rec) {
        out.log.push_back(iteration_record_json(rec, cfg.vars));
      };
    }
    LearnerResult r = learn_envelope(session, *eq, cfg.vars.size(), opts);
    out.horn = std::move(r.horn);
    out.quasi = r.state.quasi;
    out.stats = r.stats;
    out.termination = r.termination;
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.horn.clear();
  }
  return out;
}

}  // namespace

RuleReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunOutcome> runs(cfg.iterations);
  const std::size_t workers = std::clamp<std::size_t>(cfg.parallelism, 1, cfg.iterations);
  if (workers == 1) {
    for (std::size_t i = 0; i < cfg.iterations; ++i) runs[i] = run_once(cfg, i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cfg.iterations; i = next++) runs[i] = run_once(cfg, i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return aggregate(std::move(runs), cfg.vars, cfg.iterations, cfg.threshold);
}

NonterminationDemo demo_nontermination(std::size_t cap) {
  const ParsedFormula parsed = parse_formula("vars: a b c d\na ->\n-> b c\n");
  const VariableUniverse& vars = parsed.vars;
  const Formula& phi = parsed.formula;
  const std::size_t n = vars.size();
  const Model d = parse_model("d", vars);
  const Model bd = parse_model("b d", vars);
  const Model cd = parse_model("c d", vars);

  NonterminationDemo demo;
  auto& t = demo.transcript;
  t.push_back("target: a -> F ; -> b | c   over {a,b,c,d}");
  t.push_back("classic HORN with adversary cycling {d}, {b,d}, {c,d}; cap " + std::to_string(cap));

  FormulaOracle mo(phi);
  {
    MembershipSession session(mo);
    ScriptedEquivalence adversary({d, bd, cd}, true, phi);
    demo.classic = learn_classic_horn(session, adversary, n, cap, [&](const IterationRecord& rec) {
      if (!rec.counterexample) return;
      std::string line = "  EQ " + std::to_string(rec.iteration) + ": counterexample " +
                         to_string(*rec.counterexample, vars) + " (" +
                         std::string(rec.branch == Branch::positive ? "positive" : "negative") +
                         ") -> |H| = " + std::to_string(rec.horn_size);
      if (rec.horn_size == 0) {
        ++demo.resets;
        line += "  [reset to empty]";
      }
      t.push_back(std::move(line));
    });
    t.push_back("classic: " + std::string(to_string(demo.classic.termination)) + " after " +
                std::to_string(demo.classic.stats.eq_count) + " EQs, " + std::to_string(demo.resets) +
                " resets");
  }

  {
    MembershipSession session(mo);
    ExactHornEquivalence eq(phi);
    LearnerOptions opts;
    opts.check_invariants = true;
    demo.envelope = learn_envelope(session, eq, n, opts);
    const Formula learned = to_formula(n, demo.envelope.horn);
    const Formula expected = parse_formula("a ->\n", vars);
    demo.envelope_matches = entails(learned, expected) && entails(expected, learned);
    const ModelSet mods = models_of(phi);
    demo.k = eq.envelope_models().size() - mods.size();
    demo.env_size = demo.envelope.horn.size();
    demo.bounds_ok = assert_bounds(demo.envelope, demo.env_size, demo.k, n);

    t.push_back("envelope learner: " + std::string(to_string(demo.envelope.termination)) + " after " +
                std::to_string(demo.envelope.stats.eq_count) + " EQs");
    for (const auto& m : demo.envelope.horn) t.push_back("  H: " + render_rule(m, vars));
    for (const auto& x : demo.envelope.state.quasi) t.push_back("  Q excludes " + to_string(x, vars));
    t.push_back(std::string("  H equivalent to a -> F: ") + (demo.envelope_matches ? "yes" : "no"));
    t.push_back("  k = " + std::to_string(demo.k) + ", bounds " + (demo.bounds_ok ? "hold" : "VIOLATED"));
  }
  return demo;
}

}  // namespace hornenv
