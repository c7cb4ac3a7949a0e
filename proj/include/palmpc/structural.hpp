#pragma once

// Maximal palindromes centered in the second block of a fragment
// F = B1 B2 B3 B4 that are prefixes of F or extend beyond it, computed from
// F alone plus at most three LCP queries on S . S^R.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "palmpc/strings.hpp"

namespace palmpc {

struct SuperblockView {
  std::size_t start = 0;      // position of F in S
  std::size_t block_len = 0;  // |B1| = ... = |B4|
  std::span<const Symbol> letters;

  /// Half-index range [begin, end) of centers inside B2.
  std::size_t center_begin() const noexcept { return 2 * (start + block_len); }
  std::size_t center_end() const noexcept { return 2 * (start + 2 * block_len); }
};

/// Throws UsageError unless |letters| = 4 block_len > 0 and F fits in S.
void validate(const SuperblockView& view, std::size_t n);

struct StructuralCase {
  enum class Kind { Empty, Single, Periodic };
  Kind kind = Kind::Empty;
  /// Palindromic prefix lengths with centers in B2, ascending.
  std::vector<std::size_t> prefix_lengths;
  /// |P1| - |P2| for Periodic, 0 otherwise.
  std::size_t period = 0;
};

StructuralCase classify(const PalindromeTable& local, std::size_t block_len);
StructuralCase classify(const SuperblockView& view);

enum class QueryPurpose { Center, LeftPeriod, RightPeriod };

/// LCP_{S'}(first, second), answers are only needed up to `limit`.
struct LcpQuery {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t limit = 0;
  QueryPurpose purpose = QueryPurpose::Center;
};

struct CenterResult {
  Center center;
  std::size_t length = 0;
  friend bool operator==(const CenterResult&, const CenterResult&) = default;
};

/// Lengths of the periodic run around F: S[i-a, i+b_ext) has period p.
struct PeriodicExtent {
  std::size_t left = 0;   // a
  std::size_t right = 0;  // b_ext, measured from i
};

/// Drives the query protocol in two waves so a distributed caller can
/// answer the queries between steps:
///   first_wave()             -> Single: the center query; Periodic: a and b
///   second_wave(answers)     -> the Case A center query, if any
///   finish(answer)           -> the maximal set
class MaximalSetSolver {
 public:
  MaximalSetSolver(const SuperblockView& view, std::size_t n, StructuralCase shape);

  const StructuralCase& shape() const noexcept { return shape_; }
  const std::optional<PeriodicExtent>& extent() const noexcept { return extent_; }

  std::vector<LcpQuery> first_wave() const;
  std::optional<LcpQuery> second_wave(std::span<const std::size_t> first_answers);
  std::vector<CenterResult> finish(std::optional<std::size_t> second_answer) const;

  /// Case A / Case B center counts of the last finish() (Periodic only).
  std::size_t case_a_count() const noexcept { return case_a_length_ ? 1 : 0; }

 private:
  std::size_t start_;
  std::size_t n_;
  StructuralCase shape_;
  std::optional<PeriodicExtent> extent_;
  std::vector<std::size_t> first_answers_;
  std::optional<std::size_t> case_a_length_;

  Center center_of_prefix(std::size_t length) const noexcept { return Center{2 * start_ + length - 1}; }
};

/// Runs the whole protocol against a synchronous oracle.
std::vector<CenterResult> compute_maximal_set(const SuperblockView& view, std::size_t n,
                                              const LcpOracle& lcp);

/// Final lengths for every center in B2 (indexed from view.center_begin()).
/// A center whose palindrome within F starts after F's first letter keeps the
/// local value; a center whose local palindrome is a prefix of F takes the
/// matching entry of `maximal`.
std::vector<std::size_t> merge_with_local(const SuperblockView& view, const PalindromeTable& local,
                                          std::span<const CenterResult> maximal);
/// Same, from the local lengths of the B2 centers only.
std::vector<std::size_t> merge_with_local(const SuperblockView& view, std::span<const std::size_t> local_b2,
                                          std::span<const CenterResult> maximal);

}  // namespace palmpc
