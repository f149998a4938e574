#include <atomic>
#include <cstdlib>
#include <string>

#include "hornenv/errors.hpp"
#include "hornenv/kernels.hpp"

namespace hornenv::kernels {

namespace {

struct Table {
  decltype(&scalar::eval_cnf) eval_cnf;
  decltype(&scalar::meet_of_supersets) meet_of_supersets;
  decltype(&scalar::and_broadcast) and_broadcast;
};

constexpr Table kScalar{&scalar::eval_cnf, &scalar::meet_of_supersets, &scalar::and_broadcast};
#ifdef HORNENV_HAVE_AVX2_KERNELS
constexpr Table kAvx2{&avx2::eval_cnf, &avx2::meet_of_supersets, &avx2::and_broadcast};
#endif

const Table& table_for(Isa isa) {
#ifdef HORNENV_HAVE_AVX2_KERNELS
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

Isa detect() {
  if (const char* env = std::getenv("HORNENV_ISA")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
  }
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{&table_for(detect())};
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(HORNENV_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  if (isa == Isa::avx2) return __builtin_cpu_supports("avx2");
#endif
  return false;
}

Isa active_isa() {
  return current().load(std::memory_order_relaxed) == &table_for(Isa::scalar) ? Isa::scalar
                                                                             : Isa::avx2;
}

void force_isa(std::optional<Isa> isa) {
  const Isa chosen = isa.value_or(detect());
  if (!isa_supported(chosen)) {
    throw UsageError("instruction set '" + std::string(isa_name(chosen)) +
                     "' is not supported on this CPU");
  }
  current().store(&table_for(chosen), std::memory_order_relaxed);
}

void eval_cnf(std::span<const std::uint64_t> models, std::span<const PackedClause> clauses,
              std::span<std::uint8_t> out) {
  if (out.size() < models.size()) throw UsageError("eval_cnf: output span too small");
  current().load(std::memory_order_relaxed)->eval_cnf(models, clauses, out);
}

Meet meet_of_supersets(std::span<const std::uint64_t> models, std::uint64_t x, bool strict) {
  return current().load(std::memory_order_relaxed)->meet_of_supersets(models, x, strict);
}

void and_broadcast(std::span<const std::uint64_t> models, std::uint64_t x,
                   std::span<std::uint64_t> out) {
  if (out.size() < models.size()) throw UsageError("and_broadcast: output span too small");
  current().load(std::memory_order_relaxed)->and_broadcast(models, x, out);
}

}  // namespace hornenv::kernels
