// Compiled with -mavx2; only reached after the dispatcher has checked CPUID.

#include <immintrin.h>

#include <bit>

#include "hornenv/kernels.hpp"

namespace hornenv::kernels::avx2 {

namespace {

inline __m256i load4(const std::uint64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline __m256i broadcast(std::uint64_t v) {
  return _mm256_set1_epi64x(static_cast<long long>(v));
}

inline int lane_mask(__m256i v) { return _mm256_movemask_pd(_mm256_castsi256_pd(v)); }

}  // namespace

void eval_cnf(std::span<const std::uint64_t> models, std::span<const PackedClause> clauses,
              std::span<std::uint8_t> out) {
  const std::size_t n = models.size();
  const __m256i zero = _mm256_setzero_si256();
  const __m256i ones = _mm256_cmpeq_epi64(zero, zero);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i m = load4(models.data() + i);
    __m256i sat = ones;
    for (const auto& c : clauses) {
      const __m256i ant = broadcast(c.antecedent);
      const __m256i con = broadcast(c.consequent);
      const __m256i covered = _mm256_cmpeq_epi64(_mm256_and_si256(m, ant), ant);
      const __m256i missed = _mm256_cmpeq_epi64(_mm256_and_si256(m, con), zero);
      sat = _mm256_andnot_si256(_mm256_and_si256(covered, missed), sat);
      if (_mm256_testz_si256(sat, sat)) break;
    }
    const int bits = lane_mask(sat);
    out[i + 0] = static_cast<std::uint8_t>(bits & 1);
    out[i + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
    out[i + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
    out[i + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
  }
  if (i < n) scalar::eval_cnf(models.subspan(i), clauses, out.subspan(i));
}

Meet meet_of_supersets(std::span<const std::uint64_t> models, std::uint64_t x, bool strict) {
  const std::size_t n = models.size();
  const __m256i vx = broadcast(x);
  const __m256i zero = _mm256_setzero_si256();
  const __m256i ones = _mm256_cmpeq_epi64(zero, zero);
  __m256i acc = ones;
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i m = load4(models.data() + i);
    __m256i sel = _mm256_cmpeq_epi64(_mm256_and_si256(m, vx), vx);
    if (strict) sel = _mm256_andnot_si256(_mm256_cmpeq_epi64(m, vx), sel);
    // unselected lanes contribute all-ones to the AND
    acc = _mm256_and_si256(acc, _mm256_or_si256(m, _mm256_xor_si256(sel, ones)));
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(lane_mask(sel))));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  Meet r;
  r.meet = lanes[0] & lanes[1] & lanes[2] & lanes[3];
  r.count = count;
  if (i < n) {
    const Meet tail = scalar::meet_of_supersets(models.subspan(i), x, strict);
    r.meet &= tail.meet;
    r.count += tail.count;
  }
  return r;
}

void and_broadcast(std::span<const std::uint64_t> models, std::uint64_t x,
                   std::span<std::uint64_t> out) {
  const std::size_t n = models.size();
  const __m256i vx = broadcast(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i),
                        _mm256_and_si256(load4(models.data() + i), vx));
  }
  if (i < n) scalar::and_broadcast(models.subspan(i), x, out.subspan(i));
}

}  // namespace hornenv::kernels::avx2
