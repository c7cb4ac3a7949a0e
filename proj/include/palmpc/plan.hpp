#pragma once

#include <cstddef>
#include <vector>

#include "palmpc/engine.hpp"

namespace palmpc {

/// What a block machine computes.
///   First:  centers of block 0 from S[0, 2l'), entirely local.
///   Middle: centers of block t from the superblock S[(t-1)l', (t+3)l').
///   Last:   every center right of the last middle block, entirely local.
enum class Role { Idle, First, Middle, Last };

struct Assignment {
  Role role = Role::Idle;
  std::size_t center_begin = 0;  // half-index range [begin, end)
  std::size_t center_end = 0;
  std::size_t segment_begin = 0;  // letters S[begin, end) the machine needs
  std::size_t segment_end = 0;

  std::size_t center_count() const noexcept { return center_end - center_begin; }
  std::size_t segment_size() const noexcept { return segment_end - segment_begin; }
};

struct BlockPlan {
  std::size_t n = 0;
  std::size_t block_len = 0;      // l'
  std::size_t machine_count = 0;  // number of blocks, last one possibly ragged
  std::size_t middle_count = 0;   // middle machines are 1..middle_count
  std::vector<Assignment> assignments;  // indexed by machine

  std::size_t block_begin(std::size_t m) const noexcept { return std::min(n, m * block_len); }
  std::size_t block_end(std::size_t m) const noexcept { return std::min(n, (m + 1) * block_len); }
  std::size_t block_of(std::size_t pos) const noexcept { return pos / block_len; }
  std::size_t owner_of_center(std::size_t half_index) const;
};

/// MPC decomposition; epsilon must lie in (0, 0.5].
BlockPlan plan_decomposition(std::size_t n, double epsilon);
/// Decomposition for an already validated cluster (MPC or AMPC).
BlockPlan plan_decomposition(const engine::ClusterConfig& config);

}  // namespace palmpc
