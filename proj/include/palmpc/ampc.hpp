#pragma once

// AMPC variant: prefix fingerprints of S' live in the shared store, and each
// LCP query is an adaptive binary search within a single round. Works for
// any epsilon in (0, 1).
//
// Schedule: leaves (1) + tree levels (D) + downsweep (1) + queries (1)
// + max-reduction levels (D'), where D and D' depend only on epsilon.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "palmpc/engine.hpp"
#include "palmpc/fingerprint.hpp"
#include "palmpc/pipeline.hpp"
#include "palmpc/plan.hpp"
#include "palmpc/structural.hpp"

namespace palmpc {

/// Returns phi(S'[0..q]) (inclusive) for q < 2n.
using PrefixReader = std::function<Fingerprint(std::size_t)>;

struct AmpcLcp {
  std::size_t length = 0;
  std::size_t reads = 0;
};

/// Binary search on prefix fingerprints. The answer is clamped at `limit`
/// and at the end of S'; reads <= 2 + 2 ceil(log2(limit + 1)).
AmpcLcp ampc_lcp(std::size_t i, std::size_t j, std::size_t limit, std::size_t n,
                 const FingerprintScheme& scheme, const PrefixReader& prefix);

/// Shared-store keys.
namespace ampc_key {
inline constexpr std::uint64_t kTree = 1;
inline constexpr std::uint64_t kPrefix = 2;
inline constexpr std::uint64_t kBest = 3;
inline std::uint64_t make(std::uint64_t space, std::uint64_t level, std::uint64_t index) {
  return space << 56 | level << 48 | index;
}
}  // namespace ampc_key

class AmpcPipeline {
 public:
  /// Throws UsageError for empty text or epsilon outside (0, 1).
  AmpcPipeline(const Text& text, const SolveOptions& options);
  ~AmpcPipeline();
  AmpcPipeline(AmpcPipeline&&) noexcept;
  AmpcPipeline& operator=(AmpcPipeline&&) noexcept;

  const engine::ClusterConfig& config() const noexcept;
  const BlockPlan& plan() const noexcept;
  const FingerprintScheme& scheme() const noexcept;
  const engine::RunStats& stats() const noexcept;
  std::size_t fanout() const noexcept;
  /// Levels of the prefix tree, padded so the count depends only on epsilon.
  std::size_t tree_depth() const noexcept;
  std::size_t reduce_depth() const noexcept;

  /// Leaves, tree levels and the downsweep (tree_depth() + 2 rounds).
  void build_prefix_fingerprints();
  /// Unmetered dump of a stored prefix fingerprint.
  Fingerprint prefix(std::size_t q) const;

  /// One round of adaptive queries, at most 3 per machine.
  std::vector<std::vector<AmpcLcp>> answer_lcp(const std::vector<std::vector<LcpQuery>>& queries);

  /// The whole schedule on a fresh pipeline.
  PalindromeRun run();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

PalindromeRun solve_ampc(const Text& text, const SolveOptions& options);

}  // namespace palmpc
