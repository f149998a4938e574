#include "hornenv/kernels.hpp"

namespace hornenv::kernels::scalar {

void eval_cnf(std::span<const std::uint64_t> models, std::span<const PackedClause> clauses,
              std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::uint64_t m = models[i];
    std::uint8_t sat = 1;
    for (const auto& c : clauses) {
      if ((m & c.antecedent) == c.antecedent && (m & c.consequent) == 0) {
        sat = 0;
        break;
      }
    }
    out[i] = sat;
  }
}

Meet meet_of_supersets(std::span<const std::uint64_t> models, std::uint64_t x, bool strict) {
  Meet r;
  for (const std::uint64_t m : models) {
    if ((m & x) != x) continue;
    if (strict && m == x) continue;
    r.meet &= m;
    ++r.count;
  }
  return r;
}

void and_broadcast(std::span<const std::uint64_t> models, std::uint64_t x,
                   std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < models.size(); ++i) out[i] = models[i] & x;
}

}  // namespace hornenv::kernels::scalar
