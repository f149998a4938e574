#include "hornenv/logic.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "hornenv/errors.hpp"

namespace hornenv {

namespace {

constexpr std::size_t kChunk = 4096;

void require_width(const Model& x, std::size_t width) {
  if (x.width() != width) {
    throw UsageError("model width " + std::to_string(x.width()) + " does not match " +
                     std::to_string(width));
  }
}

// Calls sink(word) for every model in `candidates` satisfying `clauses`,
// evaluating in chunks through the dispatched kernel.
template <class Gen, class Sink>
void filter_models(std::size_t total, Gen&& candidate, std::span<const kernels::PackedClause> clauses,
                   Sink&& sink) {
  std::vector<std::uint64_t> buf;
  std::vector<std::uint8_t> sat;
  buf.reserve(std::min<std::size_t>(total, kChunk));
  sat.resize(std::min<std::size_t>(total, kChunk));
  for (std::size_t base = 0; base < total; base += kChunk) {
    const std::size_t n = std::min(kChunk, total - base);
    buf.clear();
    for (std::size_t i = 0; i < n; ++i) buf.push_back(candidate(base + i));
    kernels::eval_cnf(buf, clauses, std::span(sat.data(), n));
    for (std::size_t i = 0; i < n; ++i) {
      if (sat[i]) sink(buf[i]);
    }
  }
}

// Supersets of x, as packed words, in ascending order.
struct SupersetEnumerator {
  std::uint64_t x;
  std::vector<std::size_t> free_bits;

  SupersetEnumerator(std::uint64_t x_, std::size_t width) : x(x_) {
    for (std::size_t i = 0; i < width; ++i) {
      if (((x >> i) & 1U) == 0) free_bits.push_back(i);
    }
  }
  std::size_t size() const { return std::size_t{1} << free_bits.size(); }
  std::uint64_t operator()(std::size_t k) const {
    std::uint64_t m = x;
    for (std::size_t j = 0; j < free_bits.size(); ++j) {
      if ((k >> j) & 1U) m |= std::uint64_t{1} << free_bits[j];
    }
    return m;
  }
};

ModelSet closure_packed(const ModelSet& models) {
  const std::size_t width = models.width();
  std::vector<std::uint64_t> members;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::uint64_t> scratch;
  for (const std::uint64_t m : models.packed()) {
    scratch.resize(members.size());
    kernels::and_broadcast(members, m, scratch);
    if (seen.insert(m).second) members.push_back(m);
    for (const std::uint64_t y : scratch) {
      if (seen.insert(y).second) members.push_back(y);
    }
  }
  std::vector<Model> out;
  out.reserve(members.size());
  for (auto w : members) out.push_back(Model::from_word(width, w));
  return ModelSet(width, std::move(out));
}

ModelSet closure_generic(const ModelSet& models) {
  std::set<Model> members;
  std::vector<Model> order;
  for (const auto& m : models) {
    std::vector<Model> fresh;
    for (const auto& y : order) fresh.push_back(m & y);
    if (members.insert(m).second) order.push_back(m);
    for (auto& y : fresh) {
      if (members.insert(y).second) order.push_back(std::move(y));
    }
  }
  return ModelSet(models.width(), std::move(order));
}

}  // namespace

void require_enumerable(std::size_t width, std::size_t cap) {
  if (cap > kMaxBruteForceCap) {
    throw UsageError("brute-force cap " + std::to_string(cap) + " exceeds hard limit " +
                     std::to_string(kMaxBruteForceCap));
  }
  if (width > cap) throw CapExceeded(width, cap);
}

bool satisfies(const Model& x, const Clause& c) {
  return !(c.antecedent.is_subset_of(x) && !c.consequent.intersects(x));
}

bool satisfies(const Model& x, const MetaClause& m) {
  if (!m.antecedent.is_subset_of(x)) return true;
  if (m.negative) return false;
  return m.consequent.is_subset_of(x);
}

bool satisfies(const Model& x, const Formula& f) {
  require_width(x, f.width());
  return std::all_of(f.clauses().begin(), f.clauses().end(),
                     [&](const Clause& c) { return satisfies(x, c); });
}

bool satisfies(const Model& x, const std::vector<MetaClause>& h) {
  return std::all_of(h.begin(), h.end(), [&](const MetaClause& m) { return satisfies(x, m); });
}

bool satisfies(const Model& x, const Hypothesis& hyp) {
  require_width(x, hyp.width);
  if (!satisfies(x, hyp.horn)) return false;
  return std::find(hyp.quasi.begin(), hyp.quasi.end(), x) == hyp.quasi.end();
}

Model intersect(const Model& x, const Model& y) { return x & y; }

ModelSet closure(const ModelSet& models) {
  return models.packed_available() ? closure_packed(models) : closure_generic(models);
}

bool is_intersection_closed(const ModelSet& models) {
  return closure(models).size() == models.size();
}

MetaClause make_horn(const ModelSet& positives, const Model& x) {
  require_width(x, positives.width());
  if (positives.packed_available()) {
    const auto meet = kernels::meet_of_supersets(positives.packed(), x.word(), true);
    if (meet.count == 0) return MetaClause::bottom(x);
    return MetaClause::implies(x, Model::from_word(x.width(), meet.meet & ~x.word()));
  }
  std::optional<Model> meet;
  for (const auto& e : positives) {
    if (!x.is_strict_subset_of(e)) continue;
    if (meet) {
      *meet &= e;
    } else {
      meet = e;
    }
  }
  if (!meet) return MetaClause::bottom(x);
  return MetaClause::implies(x, meet->minus(x));
}

Clause make_quasi(const Model& x) { return Clause(x, x.complement()); }

std::vector<kernels::PackedClause> pack(const Formula& f) {
  if (f.width() > Model::kWordBits) throw UsageError("pack requires width <= 64");
  std::vector<kernels::PackedClause> out;
  out.reserve(f.size());
  for (const auto& c : f.clauses()) out.push_back({c.antecedent.word(), c.consequent.word()});
  return out;
}

ModelSet models_of(const Formula& f, std::size_t cap) {
  require_enumerable(f.width(), cap);
  const auto clauses = pack(f);
  std::vector<Model> out;
  filter_models(
      std::size_t{1} << f.width(), [](std::size_t k) { return static_cast<std::uint64_t>(k); },
      clauses, [&](std::uint64_t w) { out.push_back(Model::from_word(f.width(), w)); });
  return ModelSet(f.width(), std::move(out));
}

ModelSet models_of(const Hypothesis& hyp, std::size_t cap) {
  return models_of(to_formula(hyp), cap);
}

Model consequence_closure(const Formula& f, const Model& x, std::size_t cap) {
  require_width(x, f.width());
  require_enumerable(f.width(), cap);
  const auto clauses = pack(f);
  SupersetEnumerator supersets(x.word(), f.width());
  std::uint64_t meet = ~std::uint64_t{0};
  filter_models(supersets.size(), supersets, clauses, [&](std::uint64_t w) { meet &= w; });
  const std::uint64_t all = Model::full(f.width()).word();
  return Model::from_word(f.width(), meet & all & ~x.word());
}

bool is_saturated(const std::vector<MetaClause>& h, std::size_t width, std::size_t cap) {
  require_enumerable(width, cap);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].width() != width) throw UsageError("metaclause width mismatch");
    if (satisfies(h[i].antecedent, h[i])) return false;
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (i != j && !satisfies(h[i].antecedent, h[j])) return false;
    }
  }
  const Formula hf = to_formula(width, h);
  const auto clauses = pack(hf);
  for (const auto& m : h) {
    SupersetEnumerator supersets(m.antecedent.word(), width);
    std::uint64_t meet = ~std::uint64_t{0};
    std::size_t covering = 0;
    filter_models(supersets.size(), supersets, clauses, [&](std::uint64_t w) {
      meet &= w;
      ++covering;
    });
    if (covering == 0) {
      if (!m.negative) return false;
      continue;
    }
    if (m.negative) return false;
    const std::uint64_t implied = meet & ~m.antecedent.word();
    if (m.consequent.word() != implied) return false;
  }
  return true;
}

ModelSet envelope_bruteforce(const Formula& f, std::size_t cap) {
  return closure(models_of(f, cap));
}

bool entails(const Formula& lhs, const Formula& rhs, std::size_t cap) {
  if (lhs.width() != rhs.width()) throw UsageError("entails: formula widths differ");
  const ModelSet l = models_of(lhs, cap);
  const ModelSet r = models_of(rhs, cap);
  return std::includes(r.begin(), r.end(), l.begin(), l.end());
}

bool equivalent(const Formula& lhs, const Formula& rhs, std::size_t cap) {
  if (lhs.width() != rhs.width()) throw UsageError("equivalent: formula widths differ");
  return models_of(lhs, cap) == models_of(rhs, cap);
}

}  // namespace hornenv
