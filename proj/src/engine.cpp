#include "palmpc/engine.hpp"

#include <cmath>
#include <sstream>

namespace palmpc {

MemoryCapExceeded::MemoryCapExceeded(std::size_t machine, std::size_t round, std::size_t words,
                                     std::size_t cap, const std::string& where)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "machine " << machine << " exceeded its memory cap in round " << round << " ("
           << where << "): " << words << " words > " << cap;
        return os.str();
      }()),
      machine_(machine),
      round_(round),
      words_(words),
      cap_(cap) {}

}  // namespace palmpc

namespace palmpc::engine {

std::string_view model_name(Model m) noexcept { return m == Model::Mpc ? "mpc" : "ampc"; }

std::size_t ceil_power(std::size_t n, double exponent) {
  if (n <= 1) return n;
  const long double target = static_cast<long double>(exponent) * std::log(static_cast<long double>(n));
  auto c = static_cast<std::size_t>(std::ceil(std::pow(static_cast<long double>(n), exponent)));
  // Nudge across floating-point noise: want the least c with log c >= target.
  constexpr long double kSlack = 1e-12L;
  while (c > 1 && std::log(static_cast<long double>(c - 1)) >= target - kSlack) --c;
  while (std::log(static_cast<long double>(c)) < target - kSlack) ++c;
  return std::max<std::size_t>(c, 1);
}

ClusterConfig ClusterConfig::make(std::size_t n, double epsilon, Model model,
                                  std::size_t memory_constant, std::uint64_t seed) {
  if (n == 0) throw UsageError("input must be non-empty");
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (model == Model::Mpc && epsilon > 0.5) {
    throw UsageError(
        "MPC mode requires epsilon in (0, 0.5]: with n^epsilon machines and n^(1-epsilon) words "
        "each, a machine must be able to hold one message from every other machine");
  }
  if (model == Model::Ampc && epsilon >= 1.0) throw UsageError("AMPC mode requires epsilon in (0, 1)");
  if (memory_constant == 0) throw UsageError("memory constant must be positive");

  ClusterConfig c;
  c.n = n;
  c.epsilon = epsilon;
  c.model = model;
  c.memory_constant = memory_constant;
  c.seed = seed;
  c.block_len = std::max<std::size_t>(1, ceil_power(n, 1.0 - epsilon));
  c.machine_count = (n + c.block_len - 1) / c.block_len;
  c.memory_cap_words = memory_constant * c.block_len;
  const auto log_n = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n) + 1.0)));
  c.io_budget_words = memory_constant * (c.block_len + log_n);
  if (model == Model::Mpc && c.machine_count > c.memory_cap_words) {
    throw UsageError("machine count exceeds per-machine memory");
  }
  return c;
}

}  // namespace palmpc::engine
