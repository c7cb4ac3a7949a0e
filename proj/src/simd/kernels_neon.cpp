#include "palmpc/simd.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#include <arm_neon.h>

namespace palmpc::simd::detail {
namespace {

std::size_t mismatch32(const std::uint32_t* a, const std::uint32_t* b, std::size_t len) noexcept {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const uint32x4_t eq = vceqq_u32(vld1q_u32(a + i), vld1q_u32(b + i));
    if (vminvq_u32(eq) == 0) break;
  }
  while (i < len && a[i] == b[i]) ++i;
  return i;
}

std::size_t mismatch64(const std::uint64_t* a, const std::uint64_t* b, std::size_t len) noexcept {
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const uint64x2_t eq = vceqq_u64(vld1q_u64(a + i), vld1q_u64(b + i));
    if ((vgetq_lane_u64(eq, 0) & vgetq_lane_u64(eq, 1)) == 0) break;
  }
  while (i < len && a[i] == b[i]) ++i;
  return i;
}

std::size_t mirror32(const std::uint32_t* fwd, const std::uint32_t* bwd, std::size_t len) noexcept {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    uint32x4_t vb = vld1q_u32(bwd - i - 3);
    vb = vrev64q_u32(vb);
    vb = vcombine_u32(vget_high_u32(vb), vget_low_u32(vb));
    const uint32x4_t eq = vceqq_u32(vld1q_u32(fwd + i), vb);
    if (vminvq_u32(eq) == 0) break;
  }
  while (i < len && fwd[i] == *(bwd - i)) ++i;
  return i;
}

constexpr KernelTable kNeon{mismatch32, mismatch64, mirror32};

}  // namespace

const KernelTable* neon_kernels() noexcept { return &kNeon; }

}  // namespace palmpc::simd::detail

#else

namespace palmpc::simd::detail {
const KernelTable* neon_kernels() noexcept { return nullptr; }
}  // namespace palmpc::simd::detail

#endif
