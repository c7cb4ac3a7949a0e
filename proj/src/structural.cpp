#include "palmpc/structural.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

#include "palmpc/errors.hpp"

namespace palmpc {

void validate(const SuperblockView& view, std::size_t n) {
  if (view.block_len == 0 || view.letters.size() != 4 * view.block_len) {
    throw UsageError("superblock must hold exactly 4 * block_len letters");
  }
  if (view.start + view.letters.size() > n) throw UsageError("superblock exceeds the text");
}

StructuralCase classify(const PalindromeTable& local, std::size_t block_len) {
  StructuralCase out;
  out.prefix_lengths = prefix_palindromes_in_range(local, block_len);
  const std::size_t count = out.prefix_lengths.size();
  if (count == 1) {
    out.kind = StructuralCase::Kind::Single;
  } else if (count >= 2) {
    out.kind = StructuralCase::Kind::Periodic;
    out.period = out.prefix_lengths[count - 1] - out.prefix_lengths[count - 2];
  }
  return out;
}

StructuralCase classify(const SuperblockView& view) {
  return classify(manacher(view.letters), view.block_len);
}

MaximalSetSolver::MaximalSetSolver(const SuperblockView& view, std::size_t n, StructuralCase shape)
    : start_(view.start), n_(n), shape_(std::move(shape)) {
  validate(view, n);
}

std::vector<LcpQuery> MaximalSetSolver::first_wave() const {
  std::vector<LcpQuery> out;
  switch (shape_.kind) {
    case StructuralCase::Kind::Empty:
      break;
    case StructuralCase::Kind::Single: {
      const CenterQuery q = center_query(center_of_prefix(shape_.prefix_lengths.front()), n_);
      out.push_back({q.first, q.second, q.limit, QueryPurpose::Center});
      break;
    }
    case StructuralCase::Kind::Periodic: {
      const std::size_t p = shape_.period;
      // a: how far period p extends to the left of i (read on S^R).
      if (start_ > 0) {
        out.push_back({2 * n_ - start_ - p, 2 * n_ - start_, start_, QueryPurpose::LeftPeriod});
      }
      // b: how far it extends to the right, capped at the end of S.
      out.push_back({start_, start_ + p, n_ - start_ - p, QueryPurpose::RightPeriod});
      break;
    }
  }
  return out;
}

std::optional<LcpQuery> MaximalSetSolver::second_wave(std::span<const std::size_t> answers) {
  const std::vector<LcpQuery> asked = first_wave();
  if (answers.size() != asked.size()) throw std::logic_error("answer count does not match the first wave");
  first_answers_.assign(answers.begin(), answers.end());
  if (shape_.kind != StructuralCase::Kind::Periodic) return std::nullopt;

  PeriodicExtent ext;
  for (std::size_t q = 0; q < asked.size(); ++q) {
    const std::size_t v = std::min(answers[q], asked[q].limit);
    if (asked[q].purpose == QueryPurpose::LeftPeriod) ext.left = v;
    if (asked[q].purpose == QueryPurpose::RightPeriod) ext.right = shape_.period + v;
  }
  extent_ = ext;

  case_a_length_.reset();
  for (std::size_t len : shape_.prefix_lengths) {
    if (ext.right >= ext.left && len == ext.right - ext.left) {
      // A prefix length pins down its palindrome, so Case A occurs at most once.
      assert(!case_a_length_);
      case_a_length_ = len;
    }
  }
  if (!case_a_length_) return std::nullopt;
  const CenterQuery q = center_query(center_of_prefix(*case_a_length_), n_);
  return LcpQuery{q.first, q.second, q.limit, QueryPurpose::Center};
}

std::vector<CenterResult> MaximalSetSolver::finish(std::optional<std::size_t> second_answer) const {
  std::vector<CenterResult> out;
  switch (shape_.kind) {
    case StructuralCase::Kind::Empty:
      return out;
    case StructuralCase::Kind::Single: {
      if (first_answers_.size() != 1) throw std::logic_error("single case needs its center answer");
      const Center c = center_of_prefix(shape_.prefix_lengths.front());
      out.push_back({c, palindrome_length_from_lcp(c, n_, first_answers_.front())});
      return out;
    }
    case StructuralCase::Kind::Periodic:
      break;
  }
  if (!extent_) throw std::logic_error("periodic case needs the first-wave answers");
  const std::size_t a = extent_->left;
  const std::size_t b = extent_->right;
  for (std::size_t len : shape_.prefix_lengths) {
    const Center c = center_of_prefix(len);
    if (case_a_length_ && len == *case_a_length_) {
      if (!second_answer) throw std::logic_error("Case A needs its center answer");
      out.push_back({c, palindrome_length_from_lcp(c, n_, *second_answer)});
    } else {
      // Case B: whichever end of the periodic run is reached first stops M.
      assert(len + 2 * a != 2 * b - len);
      out.push_back({c, std::min(len + 2 * a, 2 * b - len)});
    }
  }
  return out;
}

std::vector<CenterResult> compute_maximal_set(const SuperblockView& view, std::size_t n,
                                              const LcpOracle& lcp) {
  MaximalSetSolver solver(view, n, classify(view));
  std::vector<std::size_t> answers;
  for (const LcpQuery& q : solver.first_wave()) answers.push_back(lcp(q.first, q.second));
  std::optional<std::size_t> second;
  if (auto q = solver.second_wave(answers)) second = lcp(q->first, q->second);
  return solver.finish(second);
}

std::vector<std::size_t> merge_with_local(const SuperblockView& view, const PalindromeTable& local,
                                          std::span<const CenterResult> maximal) {
  std::vector<std::size_t> b2;
  b2.reserve(view.center_end() - view.center_begin());
  for (std::size_t u = view.center_begin(); u < view.center_end(); ++u) b2.push_back(local.at(Center{u - 2 * view.start}));
  return merge_with_local(view, std::span<const std::size_t>(b2), maximal);
}

std::vector<std::size_t> merge_with_local(const SuperblockView& view, std::span<const std::size_t> local_b2,
                                          std::span<const CenterResult> maximal) {
  if (local_b2.size() != view.center_end() - view.center_begin()) {
    throw UsageError("one local length per B2 center required");
  }
  std::vector<CenterResult> sorted(maximal.begin(), maximal.end());
  auto by_center = [](const CenterResult& a, const CenterResult& b) { return a.center < b.center; };
  if (!std::is_sorted(sorted.begin(), sorted.end(), by_center)) std::sort(sorted.begin(), sorted.end(), by_center);
  std::vector<std::size_t> out;
  out.reserve(local_b2.size());
  const std::size_t offset = 2 * view.start;
  for (std::size_t u = view.center_begin(); u < view.center_end(); ++u) {
    const Center rel{u - offset};
    const std::size_t len = local_b2[u - view.center_begin()];
    if (len == 0 || rel.start_of(len) > 0) {
      out.push_back(len);
      continue;
    }
    auto it = std::lower_bound(sorted.begin(), sorted.end(), CenterResult{Center{u}, 0}, by_center);
    if (it == sorted.end() || it->center.half_index != u) {
      throw std::logic_error("prefix palindrome at half-index " + std::to_string(u) +
                             " has no maximal-set entry");
    }
    out.push_back(it->length);
  }
  return out;
}

}  // namespace palmpc
