#include <atomic>

#include "palmpc/simd.hpp"

namespace palmpc::simd {
namespace {

const detail::KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return &detail::scalar_kernels();
    case Isa::Avx2: return detail::avx2_kernels();
    case Isa::Neon: return detail::neon_kernels();
  }
  return nullptr;
}

Isa best_isa() noexcept {
  if (detail::avx2_kernels() != nullptr) return Isa::Avx2;
  if (detail::neon_kernels() != nullptr) return Isa::Neon;
  return Isa::Scalar;
}

struct Selection {
  std::atomic<const detail::KernelTable*> table;
  std::atomic<Isa> isa;
  Selection() : table(table_for(best_isa())), isa(best_isa()) {}
};

Selection& selection() noexcept {
  static Selection s;
  return s;
}

}  // namespace

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::Scalar};
  if (detail::avx2_kernels() != nullptr) out.push_back(Isa::Avx2);
  if (detail::neon_kernels() != nullptr) out.push_back(Isa::Neon);
  return out;
}

Isa active() noexcept { return selection().isa.load(std::memory_order_relaxed); }

bool select(Isa isa) noexcept {
  const detail::KernelTable* t = table_for(isa);
  if (t == nullptr) return false;
  selection().table.store(t, std::memory_order_relaxed);
  selection().isa.store(isa, std::memory_order_relaxed);
  return true;
}

std::size_t mismatch(const std::uint32_t* a, const std::uint32_t* b, std::size_t len) noexcept {
  return selection().table.load(std::memory_order_relaxed)->mismatch32(a, b, len);
}

std::size_t mismatch(const std::uint64_t* a, const std::uint64_t* b, std::size_t len) noexcept {
  return selection().table.load(std::memory_order_relaxed)->mismatch64(a, b, len);
}

std::size_t mirror_mismatch(const std::uint32_t* fwd, const std::uint32_t* bwd,
                            std::size_t len) noexcept {
  return selection().table.load(std::memory_order_relaxed)->mirror32(fwd, bwd, len);
}

}  // namespace palmpc::simd
