#pragma once

// The per-machine palindrome job shared by the MPC and AMPC drivers: assemble
// the segment, run the local phase, hand out LCP queries, finalize.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "palmpc/pipeline.hpp"
#include "palmpc/plan.hpp"
#include "palmpc/structural.hpp"
#include "detail/records.hpp"

namespace palmpc::detail {

class CenterWork {
 public:
  CenterWork() = default;
  CenterWork(const Assignment& job, std::size_t n, std::size_t block_len);

  const Assignment& job() const noexcept { return job_; }
  bool active() const noexcept { return job_.role != Role::Idle; }

  /// Letters S[s_begin, s_begin + letters.size()) from a block holder.
  void receive(std::size_t s_begin, std::span<const engine::Word> letters);
  /// Manacher on the segment; middle machines classify and prepare queries,
  /// the others finish on the spot.
  void local_phase(OpTally& tally);

  std::vector<LcpQuery> first_wave() const;
  std::vector<LcpQuery> second_wave(std::span<const std::size_t> answers);
  void finish(std::span<const std::size_t> second_answers, OpTally& tally);

  bool finished() const noexcept { return finished_; }
  const std::vector<std::size_t>& owned() const noexcept { return owned_; }
  LpsResult best() const noexcept { return best_; }

  /// Adds this machine's instrumentation to `c`.
  void count_into(PipelineCounters& c) const;
  std::size_t words() const noexcept;

 private:
  Assignment job_;
  std::size_t n_ = 0;
  std::size_t block_len_ = 0;
  std::vector<Symbol> segment_;
  std::size_t received_ = 0;
  std::vector<std::size_t> local_b2_;  // middle: local lengths of the owned centers
  std::optional<MaximalSetSolver> solver_;
  std::size_t queries_ = 0;
  std::size_t case_a_ = 0;
  std::size_t case_b_ = 0;
  std::vector<std::size_t> owned_;
  LpsResult best_;
  bool finished_ = false;

  void take_owned_from_local(const PalindromeTable& local);
  void pick_best();
};

/// Ships the parts of block m (S[m l', ...)) to every machine whose segment
/// overlaps it: the first and last machines and middle machines m-2 .. m+1.
void send_segment_blocks(const BlockPlan& plan, std::size_t m, std::span<const Symbol> block, Outbox& out);

}  // namespace palmpc::detail
