#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace palmpc {

/// Bad arguments or configuration (maps to CLI exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A simulated machine exceeded its word budget.
class MemoryCapExceeded : public std::runtime_error {
 public:
  MemoryCapExceeded(std::size_t machine, std::size_t round, std::size_t words,
                    std::size_t cap, const std::string& where);

  std::size_t machine() const noexcept { return machine_; }
  std::size_t round() const noexcept { return round_; }
  std::size_t words() const noexcept { return words_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t machine_;
  std::size_t round_;
  std::size_t words_;
  std::size_t cap_;
};

/// Letter comparison contradicted fingerprint equality. The run is aborted;
/// rerunning with another seed is the recovery path.
class CollisionDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace palmpc
