#include "palmpc/strings.hpp"

#include <algorithm>
#include <string>

#include "palmpc/errors.hpp"
#include "palmpc/simd.hpp"

namespace palmpc {

Text::Text(std::vector<Symbol> letters, std::uint64_t sigma)
    : letters_(std::move(letters)), sigma_(sigma) {
  if (sigma_ == 0) throw UsageError("alphabet size must be positive");
  for (Symbol s : letters_) {
    if (s >= sigma_) {
      throw UsageError("symbol " + std::to_string(s) + " outside alphabet of size " +
                       std::to_string(sigma_));
    }
  }
}

Text Text::from_bytes(std::string_view bytes) {
  std::vector<Symbol> letters(bytes.size());
  std::transform(bytes.begin(), bytes.end(), letters.begin(),
                 [](char c) { return static_cast<Symbol>(static_cast<unsigned char>(c)); });
  return Text(std::move(letters), 256);
}

Text Text::from_letters(std::string_view s, std::uint64_t sigma) {
  std::vector<Symbol> letters;
  letters.reserve(s.size());
  for (char c : s) {
    if (c < 'a') throw UsageError(std::string("unexpected character '") + c + "'");
    letters.push_back(static_cast<Symbol>(c - 'a'));
  }
  return Text(std::move(letters), sigma);
}

PalindromeTable PalindromeTable::zeros(std::size_t n) {
  PalindromeTable t;
  t.odd.assign(n, 0);
  t.even.assign(n == 0 ? 0 : n - 1, 0);
  return t;
}

void DoubledText::copy(std::size_t begin, std::size_t end, std::vector<Symbol>& out) const {
  out.reserve(out.size() + (end - begin));
  for (std::size_t k = begin; k < end; ++k) out.push_back((*this)[k]);
}

bool is_palindrome(std::span<const Symbol> s) {
  return std::equal(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(s.size() / 2), s.rbegin());
}

bool has_period(std::span<const Symbol> s, std::size_t p) {
  if (p == 0) return false;
  if (p >= s.size()) return true;
  return simd::mismatch(s.data(), s.data() + p, s.size() - p) == s.size() - p;
}

std::size_t smallest_period(std::span<const Symbol> s) {
  if (s.empty()) throw UsageError("smallest_period of an empty string");
  // border[i] = length of the longest proper border of s[0..i]
  std::vector<std::size_t> border(s.size(), 0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    std::size_t k = border[i - 1];
    while (k > 0 && s[i] != s[k]) k = border[k - 1];
    if (s[i] == s[k]) ++k;
    border[i] = k;
  }
  return s.size() - border.back();
}

PalindromeTable manacher(std::span<const Symbol> s, OpTally* tally) {
  const std::size_t n = s.size();
  PalindromeTable table = PalindromeTable::zeros(n);
  if (n == 0) return table;
  std::uint64_t ops = 0;

  // Odd centers: radius[i] counts letters from i to the right end inclusive.
  std::vector<std::size_t> radius(n);
  {
    std::size_t l = 0, r = 0;  // rightmost palindrome is s[l, r)
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t k = 1;
      if (i < r) k = std::min(radius[l + r - 1 - i], r - i);
      const std::size_t room = std::min(i + 1, n - i);
      std::size_t grown = 0;
      if (k < room && s[i + k] == s[i - k]) {
        grown = simd::mirror_mismatch(s.data() + i + k, s.data() + i - k, room - k);
      }
      k += grown;
      ops += grown + 2;
      radius[i] = k;
      table.odd[i] = 2 * k - 1;
      if (i + k > r) {
        l = i + 1 - k;
        r = i + k;
      }
    }
  }
  // Even centers between i-1 and i.
  {
    std::size_t l = 0, r = 0;
    std::fill(radius.begin(), radius.end(), 0);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t k = 0;
      if (i < r) k = std::min(radius[l + r - i], r - i);
      const std::size_t room = std::min(i, n - i);
      std::size_t grown = 0;
      if (k < room && s[i + k] == s[i - 1 - k]) {
        grown = simd::mirror_mismatch(s.data() + i + k, s.data() + i - 1 - k, room - k);
      }
      k += grown;
      ops += grown + 2;
      radius[i] = k;
      table.even[i - 1] = 2 * k;
      if (i + k > r) {
        l = i - k;
        r = i + k;
      }
    }
  }
  if (tally != nullptr) tally->add(ops);
  return table;
}

LpsResult longest_palindrome(const PalindromeTable& table) {
  LpsResult best;
  const std::size_t centers = table.center_count();
  for (std::size_t u = 0; u < centers; ++u) {
    const Center c{u};
    const std::size_t len = table.at(c);
    if (len == 0) continue;
    const std::size_t start = c.start_of(len);
    if (len > best.length || (len == best.length && start < best.start)) best = {start, len};
  }
  return best;
}

CenterQuery center_query(Center c, std::size_t n) {
  if (c.odd_length()) {
    const std::size_t pos = c.half_index / 2;
    return {pos, 2 * n - pos - 1, std::min(pos + 1, n - pos)};
  }
  const std::size_t right = c.half_index / 2 + 1;  // ceil(c)
  return {right, 2 * n - right, std::min(right, n - right)};
}

std::size_t palindrome_length_from_lcp(Center c, std::size_t n, std::size_t lcp) {
  const std::size_t r = std::min(lcp, center_query(c, n).limit);
  return c.odd_length() ? 2 * r - 1 : 2 * r;
}

std::size_t maximal_palindrome_via_lcp(Center c, std::size_t n, const LcpOracle& lcp) {
  const CenterQuery q = center_query(c, n);
  return palindrome_length_from_lcp(c, n, lcp(q.first, q.second));
}

std::vector<std::size_t> prefix_palindromes_in_range(const PalindromeTable& local,
                                                     std::size_t block_len) {
  if (block_len == 0 || local.text_size() != 4 * block_len) {
    throw UsageError("fragment length must equal 4 * block_len");
  }
  std::vector<std::size_t> lengths;
  // Prefix length L has half-index center L - 1, which must lie in [2l', 4l').
  for (std::size_t len = 2 * block_len + 1; len <= 4 * block_len; ++len) {
    const Center c{len - 1};
    if (local.at(c) >= len && c.start_of(local.at(c)) == 0) lengths.push_back(len);
  }
  return lengths;
}

std::vector<std::size_t> prefix_palindromes_in_range(std::span<const Symbol> fragment,
                                                     std::size_t block_len) {
  if (block_len == 0 || fragment.size() != 4 * block_len) {
    throw UsageError("fragment length must equal 4 * block_len");
  }
  return prefix_palindromes_in_range(manacher(fragment), block_len);
}

}  // namespace palmpc
