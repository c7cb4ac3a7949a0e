#pragma once

// Hand-rolled generators shared by the unit tests and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <random>
#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "palmpc/strings.hpp"

namespace palmpc::testing {

/// Small deterministic RNG wrapper; bounded draws via rejection.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) {
    std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
    return d(engine_);
  }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool coin() { return below(2) == 1; }

  std::vector<Symbol> letters(std::size_t n, std::uint64_t sigma) {
    std::vector<Symbol> s(n);
    for (auto& c : s) c = static_cast<Symbol>(below(sigma));
    return s;
  }

  /// Random string with planted structure: runs, repeats and mirrored halves
  /// make long palindromes and periods common.
  std::vector<Symbol> structured(std::size_t n, std::uint64_t sigma) {
    std::vector<Symbol> s;
    while (s.size() < n) {
      switch (below(4)) {
        case 0: {
          const Symbol c = static_cast<Symbol>(below(sigma));
          s.insert(s.end(), between(1, 8), c);
          break;
        }
        case 1: {
          if (s.empty()) break;
          const std::size_t len = between(1, s.size());
          const std::vector<Symbol> tail(s.end() - static_cast<std::ptrdiff_t>(len), s.end());
          s.insert(s.end(), tail.rbegin(), tail.rend());
          break;
        }
        case 2: {
          if (s.empty()) break;
          const std::size_t p = between(1, std::min<std::size_t>(s.size(), 7));
          const std::size_t reps = between(1, 20);
          for (std::size_t r = 0; r < reps; ++r) s.push_back(s[s.size() - p]);
          break;
        }
        default:
          s.push_back(static_cast<Symbol>(below(sigma)));
      }
    }
    s.resize(n);
    return s;
  }

  std::vector<Symbol> palindrome(std::size_t n, std::uint64_t sigma) {
    std::vector<Symbol> s = letters(n, sigma);
    for (std::size_t i = 0; i < n / 2; ++i) s[n - 1 - i] = s[i];
    return s;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<Symbol> word(std::string_view letters) {
  std::vector<Symbol> s;
  for (char c : letters) s.push_back(static_cast<Symbol>(c - 'a'));
  return s;
}

}  // namespace palmpc::testing
