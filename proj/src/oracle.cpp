#include "palmpc/oracle.hpp"

#include "palmpc/errors.hpp"

namespace palmpc::oracle {

PalindromeTable maximal_palindromes(std::span<const Symbol> s) {
  const std::size_t n = s.size();
  PalindromeTable t;
  t.odd.resize(n);
  t.even.resize(n == 0 ? 0 : n - 1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = 0;
    while (r + 1 <= c && c + r + 1 < n && s[c - r - 1] == s[c + r + 1]) ++r;
    t.odd[c] = 2 * r + 1;
  }
  for (std::size_t m = 0; m + 1 < n; ++m) {
    std::size_t len = 0;
    std::size_t lo = m + 1;  // next candidate pair is (lo - 1, hi)
    std::size_t hi = m + 1;
    while (lo > 0 && hi < n && s[lo - 1] == s[hi]) {
      --lo;
      ++hi;
      len += 2;
    }
    t.even[m] = len;
  }
  return t;
}

std::size_t lcp(std::span<const Symbol> s, std::size_t p1, std::size_t p2) {
  const std::size_t n = s.size();
  auto at = [&](std::size_t k) { return k < n ? s[k] : s[2 * n - 1 - k]; };
  std::size_t l = 0;
  while (p1 + l < 2 * n && p2 + l < 2 * n && at(p1 + l) == at(p2 + l)) ++l;
  return l;
}

LpsResult lps(std::span<const Symbol> s) {
  if (s.empty()) throw UsageError("longest palindromic substring of an empty string");
  const PalindromeTable t = maximal_palindromes(s);
  LpsResult best{0, 0};
  // Scan start positions left to right so ties keep the leftmost.
  for (std::size_t c = 0; c < t.odd.size(); ++c) {
    const std::size_t start = c - (t.odd[c] - 1) / 2;
    if (t.odd[c] > best.length || (t.odd[c] == best.length && start < best.start)) best = {start, t.odd[c]};
  }
  for (std::size_t m = 0; m < t.even.size(); ++m) {
    if (t.even[m] == 0) continue;
    const std::size_t start = m + 1 - t.even[m] / 2;
    if (t.even[m] > best.length || (t.even[m] == best.length && start < best.start)) best = {start, t.even[m]};
  }
  return best;
}

}  // namespace palmpc::oracle
