#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace palmpc {

using Symbol = std::uint32_t;

/// A string over the integer alphabet [0, sigma).
class Text {
 public:
  Text() = default;
  Text(std::vector<Symbol> letters, std::uint64_t sigma);

  /// Raw bytes, sigma = 256.
  static Text from_bytes(std::string_view bytes);
  /// Maps 'a' -> 0, 'b' -> 1, ... ; every character must be in [a, a+sigma).
  static Text from_letters(std::string_view letters, std::uint64_t sigma = 26);

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::uint64_t sigma() const noexcept { return sigma_; }
  Symbol operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Symbol> view() const noexcept { return letters_; }
  const std::vector<Symbol>& letters() const noexcept { return letters_; }

  friend bool operator==(const Text&, const Text&) = default;

 private:
  std::vector<Symbol> letters_;
  std::uint64_t sigma_ = 1;
};

/// Half-index encoding of a palindrome center: u = 2c. Even u is the odd-length
/// center at position u/2, odd u sits between (u-1)/2 and (u+1)/2.
struct Center {
  std::size_t half_index = 0;

  bool odd_length() const noexcept { return half_index % 2 == 0; }
  /// Leftmost position of a palindrome of `length` around this center.
  std::size_t start_of(std::size_t length) const noexcept {
    return (half_index + 1 - length) / 2;
  }
  friend auto operator<=>(const Center&, const Center&) = default;
};

/// Maximal palindrome lengths: odd[c] for the center at c, even[m] for the
/// center between m and m+1.
struct PalindromeTable {
  std::vector<std::size_t> odd;
  std::vector<std::size_t> even;

  std::size_t text_size() const noexcept { return odd.size(); }
  std::size_t center_count() const noexcept { return odd.size() + even.size(); }
  std::size_t at(Center c) const {
    return c.odd_length() ? odd[c.half_index / 2] : even[c.half_index / 2];
  }
  void set(Center c, std::size_t length) {
    (c.odd_length() ? odd[c.half_index / 2] : even[c.half_index / 2]) = length;
  }
  static PalindromeTable zeros(std::size_t n);

  friend bool operator==(const PalindromeTable&, const PalindromeTable&) = default;
};

/// Leftmost-longest palindromic substring.
struct LpsResult {
  std::size_t start = 0;
  std::size_t length = 0;
  friend bool operator==(const LpsResult&, const LpsResult&) = default;
};

/// S' = S . reverse(S) without materializing the reversal.
class DoubledText {
 public:
  explicit DoubledText(std::span<const Symbol> base) : base_(base) {}

  std::size_t size() const noexcept { return 2 * base_.size(); }
  std::size_t base_size() const noexcept { return base_.size(); }
  Symbol operator[](std::size_t k) const {
    const std::size_t n = base_.size();
    return k < n ? base_[k] : base_[2 * n - 1 - k];
  }
  /// Copies S'[begin, end) into `out`.
  void copy(std::size_t begin, std::size_t end, std::vector<Symbol>& out) const;

 private:
  std::span<const Symbol> base_;
};

/// Answers LCP_{S'}(i, j) on the doubled text.
using LcpOracle = std::function<std::size_t(std::size_t, std::size_t)>;

/// Counts elementary operations for work accounting.
struct OpTally {
  std::uint64_t ops = 0;
  void add(std::uint64_t k) noexcept { ops += k; }
};

bool is_palindrome(std::span<const Symbol> s);
bool has_period(std::span<const Symbol> s, std::size_t p);

/// Least p >= 1 that is a period of `s` (border-array based). Throws on empty input.
std::size_t smallest_period(std::span<const Symbol> s);

/// All maximal palindromes in linear time.
PalindromeTable manacher(std::span<const Symbol> s, OpTally* tally = nullptr);

/// Longest palindrome, leftmost on ties; {0, 0} for an empty table.
LpsResult longest_palindrome(const PalindromeTable& table);

/// Clamp for the LCP-based center query. S' carries no separator, so the raw
/// LCP can run past the string ends; the radius never exceeds this limit.
struct CenterQuery {
  std::size_t first;
  std::size_t second;
  std::size_t limit;
};
CenterQuery center_query(Center c, std::size_t n);

/// Turns an (unclamped or clamped) LCP answer for `center_query(c, n)` into a
/// palindrome length.
std::size_t palindrome_length_from_lcp(Center c, std::size_t n, std::size_t lcp);

/// Maximal palindrome length at `c` through one LCP query on S . S^R.
std::size_t maximal_palindrome_via_lcp(Center c, std::size_t n, const LcpOracle& lcp);

/// Lengths L of palindromic prefixes of `fragment` whose center (L-1)/2 lies in
/// [block_len, 2 block_len). `fragment` must have length 4 * block_len.
/// Ascending order.
std::vector<std::size_t> prefix_palindromes_in_range(std::span<const Symbol> fragment,
                                                     std::size_t block_len);
/// Same, reusing a Manacher table of `fragment`.
std::vector<std::size_t> prefix_palindromes_in_range(const PalindromeTable& local,
                                                     std::size_t block_len);

}  // namespace palmpc
