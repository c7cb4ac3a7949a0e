#pragma once

// All maximal palindromes and the LPS in a constant number of MPC rounds.
//
// Schedule (10 rounds):
//   1      blocks to segment owners, letter replicas, window fingerprints
//   2-5    local phase + first LCP wave (chains, chain replies, letters, letter replies)
//   6-9    second LCP wave
//   10     finalize, local bests to machine 0

#include <cstddef>
#include <memory>
#include <vector>

#include "palmpc/engine.hpp"
#include "palmpc/fingerprint.hpp"
#include "palmpc/pipeline.hpp"
#include "palmpc/plan.hpp"
#include "palmpc/structural.hpp"

namespace palmpc {

class MpcPipeline {
 public:
  /// Throws UsageError for empty text or epsilon outside (0, 0.5].
  MpcPipeline(const Text& text, const SolveOptions& options);
  ~MpcPipeline();
  MpcPipeline(MpcPipeline&&) noexcept;
  MpcPipeline& operator=(MpcPipeline&&) noexcept;

  const engine::ClusterConfig& config() const noexcept;
  const BlockPlan& plan() const noexcept;
  const FingerprintScheme& scheme() const noexcept;
  /// Modular fragment length w (= machine count).
  std::size_t window() const noexcept;
  const engine::RunStats& stats() const noexcept;

  /// Round 1. Afterwards machine x holds the fingerprints of S'[k, k+w) for
  /// every k = x (mod w), tails clipped at 2n.
  void build_modular_store();
  /// Windows held by machine x. Valid between build_modular_store() and the
  /// first LCP wave, which spreads the store over helper machines.
  std::size_t store_size(engine::MachineId x) const;
  /// Layer values of the window starting at k, read from its holder.
  std::vector<std::uint64_t> store_window(std::size_t k) const;

  /// One LCP wave (4 rounds) for up to 3 queries per machine; answers are
  /// clamped at each query's limit and at the end of S'.
  std::vector<std::vector<std::size_t>> answer_lcp(const std::vector<std::vector<LcpQuery>>& queries);

  /// The whole schedule on a fresh pipeline.
  PalindromeRun run();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

PalindromeRun solve_mpc(const Text& text, const SolveOptions& options);

}  // namespace palmpc
