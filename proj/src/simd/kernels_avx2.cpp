#include "palmpc/simd.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

#define PALMPC_AVX2_TARGET __attribute__((target("avx2,bmi")))

namespace palmpc::simd::detail {
namespace {

PALMPC_AVX2_TARGET
std::size_t mismatch32(const std::uint32_t* a, const std::uint32_t* b, std::size_t len) noexcept {
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const auto eq = static_cast<std::uint32_t>(
        _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(va, vb))));
    if (eq != 0xFFu) return i + static_cast<std::size_t>(_tzcnt_u32(~eq));
  }
  while (i < len && a[i] == b[i]) ++i;
  return i;
}

PALMPC_AVX2_TARGET
std::size_t mismatch64(const std::uint64_t* a, const std::uint64_t* b, std::size_t len) noexcept {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const auto eq = static_cast<std::uint32_t>(
        _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(va, vb))));
    if (eq != 0xFu) return i + static_cast<std::size_t>(_tzcnt_u32(~eq));
  }
  while (i < len && a[i] == b[i]) ++i;
  return i;
}

PALMPC_AVX2_TARGET
std::size_t mirror32(const std::uint32_t* fwd, const std::uint32_t* bwd, std::size_t len) noexcept {
  const __m256i reverse = _mm256_setr_epi32(7, 6, 5, 4, 3, 2, 1, 0);
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256i vf = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(fwd + i));
    // bwd[-i-7 .. -i], reversed so lane j holds bwd[-i-j]
    const __m256i raw = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bwd - i - 7));
    const __m256i vb = _mm256_permutevar8x32_epi32(raw, reverse);
    const auto eq = static_cast<std::uint32_t>(
        _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(vf, vb))));
    if (eq != 0xFFu) return i + static_cast<std::size_t>(_tzcnt_u32(~eq));
  }
  while (i < len && fwd[i] == *(bwd - i)) ++i;
  return i;
}

constexpr KernelTable kAvx2{mismatch32, mismatch64, mirror32};

}  // namespace

const KernelTable* avx2_kernels() noexcept {
  __builtin_cpu_init();
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("bmi")) return nullptr;
  return &kAvx2;
}

}  // namespace palmpc::simd::detail

#else

namespace palmpc::simd::detail {
const KernelTable* avx2_kernels() noexcept { return nullptr; }
}  // namespace palmpc::simd::detail

#endif
