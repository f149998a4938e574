#pragma once

// Bulk operations over packed models (width <= 64, one model per uint64_t).
// Each entry point has a portable scalar reference and an AVX2 variant; the
// variant is picked once at runtime from CPUID and can be pinned with
// force_isa() or the HORNENV_ISA environment variable ("scalar"/"avx2").

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace hornenv::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
Isa active_isa();
// nullopt restores automatic selection. Throws UsageError if unsupported.
void force_isa(std::optional<Isa> isa);

// CNF clause ⋀antecedent → ⋁consequent; a model m falsifies it iff
// (m & antecedent) == antecedent and (m & consequent) == 0. A zero
// consequent is ⊥.
struct PackedClause {
  std::uint64_t antecedent = 0;
  std::uint64_t consequent = 0;
};

// out[i] = 1 if models[i] satisfies every clause, 0 otherwise.
void eval_cnf(std::span<const std::uint64_t> models,
              std::span<const PackedClause> clauses,
              std::span<std::uint8_t> out);

struct Meet {
  std::uint64_t meet = ~std::uint64_t{0};  // AND over the selected models
  std::size_t count = 0;                   // number of models selected
};

// Intersection of all models that contain x (strict: contain x and differ
// from it). With no model selected, meet is all-ones.
Meet meet_of_supersets(std::span<const std::uint64_t> models, std::uint64_t x, bool strict);

// out[i] = models[i] & x
void and_broadcast(std::span<const std::uint64_t> models, std::uint64_t x,
                   std::span<std::uint64_t> out);

namespace scalar {
void eval_cnf(std::span<const std::uint64_t>, std::span<const PackedClause>,
              std::span<std::uint8_t>);
Meet meet_of_supersets(std::span<const std::uint64_t>, std::uint64_t, bool);
void and_broadcast(std::span<const std::uint64_t>, std::uint64_t, std::span<std::uint64_t>);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HORNENV_HAVE_AVX2_KERNELS 1
namespace avx2 {
void eval_cnf(std::span<const std::uint64_t>, std::span<const PackedClause>,
              std::span<std::uint8_t>);
Meet meet_of_supersets(std::span<const std::uint64_t>, std::uint64_t, bool);
void and_broadcast(std::span<const std::uint64_t>, std::uint64_t, std::span<std::uint64_t>);
}  // namespace avx2
#endif

}  // namespace hornenv::kernels
