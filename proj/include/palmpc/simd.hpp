#pragma once

// Mismatch-search kernels: a scalar reference plus AVX2 / NEON variants,
// selected once at startup from the running CPU.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace palmpc::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view name(Isa isa) noexcept;

/// Kernels compiled into this binary and supported by the running CPU.
std::vector<Isa> available();

/// Currently selected kernel set.
Isa active() noexcept;

/// Forces a kernel set (tests and benchmarks). Returns false if unavailable.
bool select(Isa isa) noexcept;

/// Index of the first i < len with a[i] != b[i], or len.
std::size_t mismatch(const std::uint32_t* a, const std::uint32_t* b, std::size_t len) noexcept;
std::size_t mismatch(const std::uint64_t* a, const std::uint64_t* b, std::size_t len) noexcept;

/// Index of the first i < len with fwd[i] != bwd[-i], or len. `bwd` points at
/// the element paired with fwd[0] and is read towards lower addresses.
std::size_t mirror_mismatch(const std::uint32_t* fwd, const std::uint32_t* bwd,
                            std::size_t len) noexcept;

namespace detail {

struct KernelTable {
  std::size_t (*mismatch32)(const std::uint32_t*, const std::uint32_t*, std::size_t) noexcept;
  std::size_t (*mismatch64)(const std::uint64_t*, const std::uint64_t*, std::size_t) noexcept;
  std::size_t (*mirror32)(const std::uint32_t*, const std::uint32_t*, std::size_t) noexcept;
};

const KernelTable& scalar_kernels() noexcept;
const KernelTable* avx2_kernels() noexcept;  // nullptr when not compiled in
const KernelTable* neon_kernels() noexcept;  // nullptr when not compiled in

}  // namespace detail
}  // namespace palmpc::simd
