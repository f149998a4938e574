#include "hornenv/formula_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "hornenv/errors.hpp"

namespace hornenv {

namespace {

struct RawClause {
  std::size_t line;
  std::vector<std::size_t> antecedent;
  std::vector<std::size_t> consequent;
};

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Resolves names either against a fixed universe or by declaring them.
class NameResolver {
 public:
  explicit NameResolver(const VariableUniverse* fixed) : fixed_(fixed) {}

  void declare_header(std::size_t line, const std::vector<std::string>& names, bool seen_clause) {
    if (seen_clause) throw ParseError(line, "'vars:' header must precede all clauses");
    if (header_) throw ParseError(line, "duplicate 'vars:' header");
    header_ = true;
    for (const auto& n : names) {
      if (fixed_) {
        if (!fixed_->index_of(n)) throw ParseError(line, "unknown variable '" + n + "'");
        continue;
      }
      if (own_.index_of(n)) throw ParseError(line, "duplicate variable '" + n + "' in header");
      own_.add(n);
    }
  }

  std::size_t resolve(std::size_t line, const std::string& name) {
    if (name == "->" || name == "=>") throw ParseError(line, "more than one arrow");
    if (fixed_) {
      if (auto i = fixed_->index_of(name)) return *i;
      throw ParseError(line, "unknown variable '" + name + "'");
    }
    if (auto i = own_.index_of(name)) return *i;
    if (header_) throw ParseError(line, "variable '" + name + "' not declared in 'vars:' header");
    return own_.add(name);
  }

  const VariableUniverse& universe() const { return fixed_ ? *fixed_ : own_; }

 private:
  const VariableUniverse* fixed_;
  VariableUniverse own_;
  bool header_ = false;
};

std::vector<RawClause> parse_lines(std::string_view text, std::string_view arrow,
                                   NameResolver& names) {
  std::vector<RawClause> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.starts_with("vars:")) {
      names.declare_header(line_no, split_ws(line.substr(5)), !out.empty());
      continue;
    }
    const std::size_t at = line.find(arrow);
    if (at == std::string_view::npos) {
      throw ParseError(line_no, "expected '" + std::string(arrow) + "' in clause");
    }
    RawClause rc{line_no, {}, {}};
    for (const auto& n : split_ws(line.substr(0, at))) rc.antecedent.push_back(names.resolve(line_no, n));
    const auto rhs = line.substr(at + arrow.size());
    if (rhs.find("->") != std::string_view::npos || rhs.find("=>") != std::string_view::npos) {
      throw ParseError(line_no, "more than one arrow");
    }
    for (const auto& n : split_ws(rhs)) rc.consequent.push_back(names.resolve(line_no, n));
    out.push_back(std::move(rc));
    if (end == text.size()) break;
  }
  return out;
}

std::string join_names(const Model& m, const VariableUniverse& vars, std::string_view sep) {
  std::string out;
  bool first = true;
  for (auto i : m.indices()) {
    if (!first) out += sep;
    out += vars.name(i);
    first = false;
  }
  return out;
}

std::string header_line(const VariableUniverse& vars) {
  std::string out = "vars:";
  for (const auto& n : vars.names()) {
    out += ' ';
    out += n;
  }
  out += '\n';
  return out;
}

std::string arrow_line(const Model& ant, std::string_view arrow, const Model* con,
                       const VariableUniverse& vars) {
  std::string out = join_names(ant, vars, " ");
  if (!out.empty()) out += ' ';
  out += arrow;
  if (con && !con->none()) {
    out += ' ';
    out += join_names(*con, vars, " ");
  }
  return out;
}

}  // namespace

ParsedFormula parse_formula(std::string_view text) {
  NameResolver names(nullptr);
  auto raw = parse_lines(text, "->", names);
  ParsedFormula out{names.universe(), Formula(names.universe().size())};
  const std::size_t w = out.vars.size();
  for (const auto& rc : raw) out.formula.add(Clause(Model(w, rc.antecedent), Model(w, rc.consequent)));
  return out;
}

Formula parse_formula(std::string_view text, const VariableUniverse& vars) {
  NameResolver names(&vars);
  auto raw = parse_lines(text, "->", names);
  Formula f(vars.size());
  for (const auto& rc : raw) {
    f.add(Clause(Model(vars.size(), rc.antecedent), Model(vars.size(), rc.consequent)));
  }
  return f;
}

namespace {

std::vector<MetaClause> build_meta(const std::vector<RawClause>& raw, std::size_t w) {
  std::vector<MetaClause> out;
  for (const auto& rc : raw) {
    if (rc.consequent.empty()) {
      out.push_back(MetaClause::bottom(Model(w, rc.antecedent)));
    } else {
      out.push_back(MetaClause::implies(Model(w, rc.antecedent), Model(w, rc.consequent)));
    }
  }
  return out;
}

}  // namespace

ParsedMetaFormula parse_metaformula(std::string_view text) {
  NameResolver names(nullptr);
  auto raw = parse_lines(text, "=>", names);
  return {names.universe(), build_meta(raw, names.universe().size())};
}

std::vector<MetaClause> parse_metaformula(std::string_view text, const VariableUniverse& vars) {
  NameResolver names(&vars);
  return build_meta(parse_lines(text, "=>", names), vars.size());
}

std::string format_clause(const Clause& c, const VariableUniverse& vars) {
  return arrow_line(c.antecedent, "->", &c.consequent, vars);
}

std::string format_metaclause(const MetaClause& m, const VariableUniverse& vars) {
  return arrow_line(m.antecedent, "=>", m.negative ? nullptr : &m.consequent, vars);
}

std::string format_formula(const Formula& f, const VariableUniverse& vars, bool header) {
  std::string out = header ? header_line(vars) : std::string{};
  for (const auto& c : f.clauses()) {
    out += format_clause(c, vars);
    out += '\n';
  }
  return out;
}

std::string format_metaformula(const std::vector<MetaClause>& h, const VariableUniverse& vars,
                               bool header) {
  std::string out = header ? header_line(vars) : std::string{};
  for (const auto& m : h) {
    out += format_metaclause(m, vars);
    out += '\n';
  }
  return out;
}

Model parse_model(std::string_view text, const VariableUniverse& vars) {
  text = trim(text);
  if (text.starts_with('{') && text.ends_with('}')) text = text.substr(1, text.size() - 2);
  std::string cleaned(text);
  for (auto& ch : cleaned) {
    if (ch == ',') ch = ' ';
  }
  Model m(vars.size());
  for (const auto& n : split_ws(cleaned)) {
    auto i = vars.index_of(n);
    if (!i) throw UsageError("unknown variable '" + n + "' in model");
    m.set(*i);
  }
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParsedFormula read_formula_file(const std::string& path) {
  return parse_formula(read_text_file(path));
}

}  // namespace hornenv
