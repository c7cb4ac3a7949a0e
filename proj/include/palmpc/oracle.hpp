#pragma once

// Brute-force ground truth. Shares no code with the fast paths.

#include <cstddef>
#include <span>

#include "palmpc/strings.hpp"

namespace palmpc::oracle {

/// Expand-around-center, O(n^2) worst case.
PalindromeTable maximal_palindromes(std::span<const Symbol> s);

/// Symbol-by-symbol LCP of S'[p1..] and S'[p2..] where S' = s . reverse(s).
/// Positions may equal 2n (empty suffix).
std::size_t lcp(std::span<const Symbol> s, std::size_t p1, std::size_t p2);

/// Leftmost longest palindromic substring. Throws UsageError on empty input.
LpsResult lps(std::span<const Symbol> s);

}  // namespace palmpc::oracle
