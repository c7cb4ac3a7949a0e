#include "palmpc/simd.hpp"

namespace palmpc::simd::detail {
namespace {

std::size_t mismatch32(const std::uint32_t* a, const std::uint32_t* b, std::size_t len) noexcept {
  std::size_t i = 0;
  while (i < len && a[i] == b[i]) ++i;
  return i;
}

std::size_t mismatch64(const std::uint64_t* a, const std::uint64_t* b, std::size_t len) noexcept {
  std::size_t i = 0;
  while (i < len && a[i] == b[i]) ++i;
  return i;
}

std::size_t mirror32(const std::uint32_t* fwd, const std::uint32_t* bwd, std::size_t len) noexcept {
  std::size_t i = 0;
  while (i < len && fwd[i] == *(bwd - i)) ++i;
  return i;
}

constexpr KernelTable kScalar{mismatch32, mismatch64, mirror32};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace palmpc::simd::detail
