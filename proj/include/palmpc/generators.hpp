#pragma once

// Deterministic input families. Letters are small integers ('a' = 0).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "palmpc/strings.hpp"

namespace palmpc::gen {

/// Uniform letters over [0, sigma); identical across platforms for a seed.
Text random(std::size_t n, std::uint64_t sigma, std::uint64_t seed);
Text unary(std::size_t n);
/// (ab)^(n/2), truncated to n.
Text alternating(std::size_t n);
/// Prefix of the Fibonacci word abaababaabaab...
Text fibonacci(std::size_t n);
/// Prefix of the Thue-Morse word abbabaab...
Text thue_morse(std::size_t n);

/// Odometer over all strings of one length: starts at 0^len, next() advances
/// in lexicographic order and returns false after the last string.
class StringOdometer {
 public:
  StringOdometer(std::size_t len, std::uint64_t sigma) : sigma_(sigma), letters_(len, 0) {}
  const std::vector<Symbol>& letters() const noexcept { return letters_; }
  bool next();

 private:
  std::uint64_t sigma_;
  std::vector<Symbol> letters_;
};

}  // namespace palmpc::gen
