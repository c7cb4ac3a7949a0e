#include "detail/center_work.hpp"

#include <algorithm>
#include <stdexcept>

namespace palmpc::detail {

CenterWork::CenterWork(const Assignment& job, std::size_t n, std::size_t block_len)
    : job_(job), n_(n), block_len_(block_len) {
  if (active()) segment_.assign(job_.segment_size(), 0);
}

void CenterWork::receive(std::size_t s_begin, std::span<const engine::Word> letters) {
  const std::size_t lo = std::max(s_begin, job_.segment_begin);
  const std::size_t hi = std::min(s_begin + letters.size(), job_.segment_end);
  for (std::size_t p = lo; p < hi; ++p) segment_[p - job_.segment_begin] = static_cast<Symbol>(letters[p - s_begin]);
  received_ += hi > lo ? hi - lo : 0;
}

void CenterWork::local_phase(OpTally& tally) {
  if (!active()) return;
  if (received_ != segment_.size()) throw std::logic_error("segment incomplete before the local phase");
  const PalindromeTable local = manacher(segment_, &tally);
  take_owned_from_local(local);
  if (job_.role == Role::Middle) {
    const SuperblockView view{job_.segment_begin, block_len_, segment_};
    solver_.emplace(view, n_, classify(local, block_len_));
    local_b2_ = std::move(owned_);
    owned_.clear();
    tally.add(solver_->shape().prefix_lengths.size() + 1);
    queries_ = solver_->first_wave().size();
  } else {
    pick_best();
    finished_ = true;
  }
  segment_ = {};
}

std::vector<LcpQuery> CenterWork::first_wave() const {
  if (!solver_) return {};
  return solver_->first_wave();
}

std::vector<LcpQuery> CenterWork::second_wave(std::span<const std::size_t> answers) {
  if (!solver_) return {};
  std::vector<LcpQuery> out;
  if (auto q = solver_->second_wave(answers)) out.push_back(*q);
  queries_ += out.size();
  return out;
}

void CenterWork::finish(std::span<const std::size_t> second_answers, OpTally& tally) {
  if (finished_ || !active()) return;
  std::optional<std::size_t> second;
  if (!second_answers.empty()) second = second_answers.front();
  const std::vector<CenterResult> maximal = solver_->finish(second);
  case_a_ = solver_->case_a_count();
  if (solver_->shape().kind == StructuralCase::Kind::Periodic) case_b_ = maximal.size() - case_a_;
  const SuperblockView view{job_.segment_begin, block_len_, {}};
  owned_ = merge_with_local(view, std::span<const std::size_t>(local_b2_), maximal);
  tally.add(owned_.size() + maximal.size());
  local_b2_ = {};
  pick_best();
  finished_ = true;
}

void CenterWork::take_owned_from_local(const PalindromeTable& local) {
  owned_.clear();
  owned_.reserve(job_.center_count());
  const std::size_t offset = 2 * job_.segment_begin;
  for (std::size_t u = job_.center_begin; u < job_.center_end; ++u) owned_.push_back(local.at(Center{u - offset}));
}

void CenterWork::pick_best() {
  best_ = {};
  for (std::size_t k = 0; k < owned_.size(); ++k) {
    const std::size_t len = owned_[k];
    if (len == 0) continue;
    const std::size_t start = Center{job_.center_begin + k}.start_of(len);
    if (len > best_.length || (len == best_.length && start < best_.start)) best_ = {start, len};
  }
}

void CenterWork::count_into(PipelineCounters& c) const {
  c.lcp_queries += queries_;
  c.max_queries_per_machine = std::max(c.max_queries_per_machine, queries_);
  if (solver_) {
    switch (solver_->shape().kind) {
      case StructuralCase::Kind::Empty: ++c.empty_cases; break;
      case StructuralCase::Kind::Single: ++c.single_cases; break;
      case StructuralCase::Kind::Periodic: ++c.periodic_cases; break;
    }
  }
  c.case_a_centers += case_a_;
  c.case_b_centers += case_b_;
}

std::size_t CenterWork::words() const noexcept {
  std::size_t w = 12 + segment_.size() + local_b2_.size() + owned_.size();
  if (solver_) w += solver_->shape().prefix_lengths.size() + 8;
  return w;
}

void send_segment_blocks(const BlockPlan& plan, std::size_t m, std::span<const Symbol> block, Outbox& out) {
  const std::size_t bm = plan.block_begin(m), em = plan.block_end(m);
  std::vector<std::size_t> targets{0, plan.machine_count - 1};
  for (std::size_t t = m >= 2 ? m - 2 : 0; t <= m + 1 && t < plan.machine_count; ++t) targets.push_back(t);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (std::size_t t : targets) {
    const Assignment& a = plan.assignments[t];
    if (a.role == Role::Idle) continue;
    const std::size_t lo = std::max(bm, a.segment_begin), hi = std::min(em, a.segment_end);
    if (lo >= hi) continue;
    out.put(static_cast<MachineId>(t), Rec::Block, {lo}, block.subspan(lo - bm, hi - lo));
  }
}

}  // namespace palmpc::detail
