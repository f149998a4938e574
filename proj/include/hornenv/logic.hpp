#pragma once

#include <cstddef>
#include <vector>

#include "hornenv/clause.hpp"
#include "hornenv/kernels.hpp"
#include "hornenv/model.hpp"

namespace hornenv {

// Enumerating 2^|V| models is a test oracle, not a solver; the operations
// marked "brute force" below refuse universes wider than this by default.
inline constexpr std::size_t kDefaultBruteForceCap = 20;
// Hard ceiling for any cap passed in (packed enumeration needs |V| < 64).
inline constexpr std::size_t kMaxBruteForceCap = 32;

// Falsified iff antecedent ⊆ x and consequent ∩ x = ∅.
bool satisfies(const Model& x, const Clause& c);
// Falsified iff antecedent ⊆ x and consequent ⊈ x (⊥: iff antecedent ⊆ x).
bool satisfies(const Model& x, const MetaClause& m);
bool satisfies(const Model& x, const Formula& f);
bool satisfies(const Model& x, const std::vector<MetaClause>& h);
bool satisfies(const Model& x, const Hypothesis& hyp);

Model intersect(const Model& x, const Model& y);

// Least superset of `models` closed under pairwise intersection.
ModelSet closure(const ModelSet& models);
bool is_intersection_closed(const ModelSet& models);

// horn_{E⁺}(x): ⋀x→⊥ when no positive example strictly contains x, else
// ⋀x→⋀(⋂{e∈E⁺ | x⊂e} ∖ x).
MetaClause make_horn(const ModelSet& positives, const Model& x);

// quasi(x) = ⋀x → ⋁(V∖x), the weakest clause falsified by x.
Clause make_quasi(const Model& x);

std::vector<kernels::PackedClause> pack(const Formula& f);

// --- brute force ---------------------------------------------------------

ModelSet models_of(const Formula& f, std::size_t cap = kDefaultBruteForceCap);
ModelSet models_of(const Hypothesis& hyp, std::size_t cap = kDefaultBruteForceCap);

// φ[x] = {v ∈ V∖x | φ ⊨ ⋀x → v}.
Model consequence_closure(const Formula& f, const Model& x,
                          std::size_t cap = kDefaultBruteForceCap);

// Left- and right-saturation of a meta-Horn formula. Right saturation is
// read semantically: a metaclause must be negative exactly when no model of
// H covers its antecedent, and otherwise its consequent must be H[ant].
bool is_saturated(const std::vector<MetaClause>& h, std::size_t width,
                  std::size_t cap = kDefaultBruteForceCap);

// Model set of the Horn envelope: closure(mod(φ)).
ModelSet envelope_bruteforce(const Formula& f, std::size_t cap = kDefaultBruteForceCap);

bool entails(const Formula& lhs, const Formula& rhs, std::size_t cap = kDefaultBruteForceCap);
bool equivalent(const Formula& lhs, const Formula& rhs,
                std::size_t cap = kDefaultBruteForceCap);

// Throws CapExceeded / UsageError when `width` cannot be enumerated.
void require_enumerable(std::size_t width, std::size_t cap);

}  // namespace hornenv
