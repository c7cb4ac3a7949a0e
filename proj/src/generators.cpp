#include "palmpc/generators.hpp"

#include <bit>
#include <random>

#include "palmpc/errors.hpp"

namespace palmpc::gen {

Text random(std::size_t n, std::uint64_t sigma, std::uint64_t seed) {
  if (sigma == 0) throw UsageError("alphabet size must be positive");
  std::mt19937_64 rng(seed);
  // Rejection instead of std::uniform_int_distribution, whose output is
  // implementation-defined.
  const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % sigma + 1) % sigma;
  std::vector<Symbol> letters(n);
  for (auto& c : letters) {
    std::uint64_t v = rng();
    while (v > bound) v = rng();
    c = static_cast<Symbol>(v % sigma);
  }
  return Text(std::move(letters), sigma);
}

Text unary(std::size_t n) { return Text(std::vector<Symbol>(n, 0), 1); }

Text alternating(std::size_t n) {
  std::vector<Symbol> letters(n);
  for (std::size_t i = 0; i < n; ++i) letters[i] = static_cast<Symbol>(i % 2);
  return Text(std::move(letters), 2);
}

Text fibonacci(std::size_t n) {
  // f_k = f_{k-1} f_{k-2}, f_0 = b, f_1 = a
  std::vector<Symbol> prev{1}, cur{0};
  while (cur.size() < n) {
    std::vector<Symbol> next = cur;
    next.insert(next.end(), prev.begin(), prev.end());
    prev = std::move(cur);
    cur = std::move(next);
  }
  cur.resize(n);
  return Text(std::move(cur), 2);
}

Text thue_morse(std::size_t n) {
  std::vector<Symbol> letters(n);
  for (std::size_t i = 0; i < n; ++i) letters[i] = static_cast<Symbol>(std::popcount(i) % 2);
  return Text(std::move(letters), 2);
}

bool StringOdometer::next() {
  for (std::size_t i = letters_.size(); i-- > 0;) {
    if (letters_[i] + 1 < sigma_) {
      ++letters_[i];
      return true;
    }
    letters_[i] = 0;
  }
  return false;
}

}  // namespace palmpc::gen
