#include "palmpc/plan.hpp"

#include <algorithm>

namespace palmpc {

BlockPlan plan_decomposition(std::size_t n, double epsilon) {
  return plan_decomposition(engine::ClusterConfig::make(n, epsilon, engine::Model::Mpc));
}

BlockPlan plan_decomposition(const engine::ClusterConfig& config) {
  BlockPlan plan;
  plan.n = config.n;
  plan.block_len = config.block_len;
  plan.machine_count = config.machine_count;
  plan.assignments.assign(plan.machine_count, Assignment{});

  const std::size_t n = plan.n;
  const std::size_t lb = plan.block_len;
  const std::size_t full_blocks = n / lb;
  plan.middle_count = full_blocks > 3 ? full_blocks - 3 : 0;

  Assignment& first = plan.assignments[0];
  first.role = Role::First;
  first.center_begin = 0;
  first.center_end = std::min(2 * lb, 2 * n - 1);
  first.segment_begin = 0;
  first.segment_end = std::min(n, 2 * lb);

  for (std::size_t t = 1; t <= plan.middle_count; ++t) {
    Assignment& a = plan.assignments[t];
    a.role = Role::Middle;
    a.center_begin = 2 * t * lb;
    a.center_end = 2 * (t + 1) * lb;
    a.segment_begin = (t - 1) * lb;
    a.segment_end = (t + 3) * lb;
  }

  // Everything right of the last middle block sits within 3l' of the end of
  // S, so its palindromes fit in a local segment.
  const std::size_t tail_begin = 2 * (plan.middle_count + 1) * lb;
  if (plan.machine_count >= 2 && tail_begin < 2 * n - 1) {
    Assignment& last = plan.assignments[plan.machine_count - 1];
    last.role = Role::Last;
    last.center_begin = tail_begin;
    last.center_end = 2 * n - 1;
    const std::size_t first_pos = tail_begin / 2;
    last.segment_begin = 2 * first_pos + 1 > n ? 2 * first_pos + 1 - n : 0;
    last.segment_end = n;
  }
  return plan;
}

std::size_t BlockPlan::owner_of_center(std::size_t u) const {
  const std::size_t t = u / (2 * block_len);
  if (t == 0) return 0;
  if (t <= middle_count) return t;
  return machine_count - 1;
}

}  // namespace palmpc
