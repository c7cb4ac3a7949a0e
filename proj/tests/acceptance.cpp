// Acceptance run: one PASS/FAIL line per criterion, with the measured values.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "palmpc/ampc.hpp"
#include "palmpc/errors.hpp"
#include "palmpc/fingerprint.hpp"
#include "palmpc/generators.hpp"
#include "palmpc/mpc.hpp"
#include "palmpc/oracle.hpp"
#include "palmpc/structural.hpp"
#include "support.hpp"

using namespace palmpc;
using palmpc::testing::Rng;

namespace {

// Pinned tolerances.
constexpr std::size_t kSeedsPerConfig = 200;
constexpr std::size_t kMaxRounds = 10;
constexpr double kMaxMemoryConstant = 64.0;       // C
constexpr double kMaxTotalMemoryConstant = 64.0;  // C'
constexpr double kWorkRatioLow = 1.7;
constexpr double kWorkRatioHigh = 2.4;
constexpr std::size_t kWorkSeeds = 5;
constexpr std::size_t kExhaustiveMaxLen = 16;
constexpr std::size_t kMaxQueriesPerFragment = 3;
constexpr std::size_t kFactsMaxLen = 14;
// Runs use a generous cap so the observed constants are measured, not
// truncated by the engine's abort; criterion 4 then checks them against C.
constexpr std::size_t kMeasurementCap = 1024;

struct Memory {
  double c = 0;        // max peak / ceil(n^(1-eps))
  double c_total = 0;  // max total / n
  std::size_t runs = 0;
  void note(const PalindromeRun& run) {
    ++runs;
    c = std::max(c, static_cast<double>(run.stats.peak_machine_words) / static_cast<double>(run.config.block_len));
    c_total = std::max(c_total, static_cast<double>(run.stats.total_memory_words) / static_cast<double>(run.config.n));
  }
};

struct Ledger {
  Memory mpc_memory;
  Memory ampc_memory;
  std::size_t collisions = 0;
  std::size_t distributed_runs = 0;
  int failures = 0;
};

void report(Ledger& ledger, int id, bool pass, const std::string& title, const std::string& detail, double seconds) {
  if (!pass) ++ledger.failures;
  std::printf("[%s] %d. %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveOptions opts(double eps, std::uint64_t seed) {
  SolveOptions o;
  o.epsilon = eps;
  o.seed = seed;
  o.memory_constant = kMeasurementCap;
  return o;
}

/// Runs a distributed solver and compares against the oracle. Collisions are
/// counted, never retried.
bool run_and_compare(Ledger& ledger, const Text& t, const SolveOptions& o, bool ampc, PalindromeRun* out = nullptr) {
  ++ledger.distributed_runs;
  try {
    PalindromeRun run = ampc ? solve_ampc(t, o) : solve_mpc(t, o);
    (ampc ? ledger.ampc_memory : ledger.mpc_memory).note(run);
    const bool ok = run.gather() == oracle::maximal_palindromes(t.view()) && run.lps == oracle::lps(t.view());
    if (out != nullptr) *out = std::move(run);
    return ok;
  } catch (const CollisionDetected&) {
    ++ledger.collisions;
    return false;
  } catch (const MemoryCapExceeded& e) {
    std::printf("  %s\n", e.what());
    return false;
  }
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion_oracle_equivalence(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t runs = 0, bad = 0;
  std::string first_bad;
  for (std::size_t n : {256u, 1024u, 4096u}) {
    for (std::uint64_t sigma : {2u, 4u, 26u}) {
      for (double eps : {0.3, 0.4, 0.5}) {
        for (std::uint64_t seed = 0; seed < kSeedsPerConfig; ++seed) {
          const std::uint64_t s = seed * 1000003 + n * 31 + sigma;
          const Text t = gen::random(n, sigma, s);
          ++runs;
          if (!run_and_compare(ledger, t, opts(eps, s), false)) {
            if (bad++ == 0) first_bad = fmt(" first failure n=%zu sigma=%llu eps=%.1f seed=%llu", n,
                                            static_cast<unsigned long long>(sigma), eps,
                                            static_cast<unsigned long long>(s));
          }
        }
      }
    }
  }
  report(ledger, 1, bad == 0, "MPC tables and LPS equal the oracle",
         fmt("%zu runs, %zu mismatches%s", runs, bad, first_bad.c_str()), since(t0));
}

void criterion_exhaustive_lemma(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t fragments = 0, wrong = 0, max_queries = 0;
  std::vector<Symbol> s;
  for (std::size_t n = 1; n <= kExhaustiveMaxLen; ++n) {
    s.assign(n, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (std::size_t k = 0; k < n; ++k) s[k] = static_cast<Symbol>((mask >> k) & 1);
      const PalindromeTable truth = oracle::maximal_palindromes(s);
      for (std::size_t l = 1; 4 * l <= n; ++l) {
        for (std::size_t i = 0; i + 4 * l <= n; ++i) {
          const SuperblockView v{i, l, std::span<const Symbol>(s).subspan(i, 4 * l)};
          std::size_t calls = 0;
          const LcpOracle counted = [&](std::size_t a, std::size_t b) {
            ++calls;
            return oracle::lcp(s, a, b);
          };
          const auto maximal = compute_maximal_set(v, n, counted);
          const auto merged = merge_with_local(v, manacher(v.letters), maximal);
          ++fragments;
          max_queries = std::max(max_queries, calls);
          for (std::size_t u = v.center_begin(); u < v.center_end(); ++u) {
            if (merged[u - v.center_begin()] != truth.at(Center{u})) {
              ++wrong;
              break;
            }
          }
        }
      }
    }
  }
  report(ledger, 2, wrong == 0 && max_queries <= kMaxQueriesPerFragment,
         "exhaustive binary |S| <= 16, all (i, l'): merged maximal set equals oracle",
         fmt("%zu fragments, %zu wrong, max %zu LCP queries per fragment", fragments, wrong, max_queries), since(t0));
}

void criterion_rounds(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::size_t> mpc_rounds, ampc_rounds;
  bool exact = true;
  for (std::size_t e = 10; e <= 16; e += 2) {
    const std::size_t n = std::size_t{1} << e;
    const Text t = gen::random(n, 4, n);
    PalindromeRun run;
    exact &= run_and_compare(ledger, t, opts(0.5, n), false, &run);
    mpc_rounds.push_back(run.stats.rounds);
    exact &= run_and_compare(ledger, t, opts(0.75, n), true, &run);
    ampc_rounds.push_back(run.stats.rounds);
  }
  auto constant = [](const std::vector<std::size_t>& v) {
    return std::all_of(v.begin(), v.end(), [&](std::size_t r) { return r == v.front(); });
  };
  auto list = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t r : v) s += (s.empty() ? "" : ",") + std::to_string(r);
    return s;
  };
  const bool pass = exact && constant(mpc_rounds) && mpc_rounds.front() <= kMaxRounds && constant(ampc_rounds);
  report(ledger, 3, pass, "round count constant in n",
         fmt("MPC eps=0.5 n=2^10..2^16: [%s], R0=%zu <= %zu; AMPC eps=0.75: [%s]", list(mpc_rounds).c_str(),
             mpc_rounds.front(), kMaxRounds, list(ampc_rounds).c_str()),
         since(t0));
}

void criterion_memory(Ledger& ledger) {
  const Memory& m = ledger.mpc_memory;
  const bool pass = m.c <= kMaxMemoryConstant && m.c_total <= kMaxTotalMemoryConstant;
  report(ledger, 4, pass, "memory per machine <= C n^(1-eps), total <= C' n",
         fmt("observed over %zu MPC runs: C=%.2f, C'=%.2f (limits %.0f, %.0f); over %zu AMPC runs: C=%.2f, C'=%.2f",
             m.runs, m.c, m.c_total, kMaxMemoryConstant, kMaxTotalMemoryConstant, ledger.ampc_memory.runs,
             ledger.ampc_memory.c, ledger.ampc_memory.c_total),
         0.0);
}

void criterion_work(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> mean;
  for (std::size_t e = 12; e <= 15; ++e) {
    const std::size_t n = std::size_t{1} << e;
    double sum = 0;
    for (std::uint64_t seed = 0; seed < kWorkSeeds; ++seed) {
      sum += static_cast<double>(solve_mpc(gen::random(n, 4, seed * 7 + e), opts(0.5, seed)).stats.total_work);
    }
    mean.push_back(sum / kWorkSeeds);
  }
  bool pass = true;
  std::string ratios;
  for (std::size_t k = 1; k < mean.size(); ++k) {
    const double r = mean[k] / mean[k - 1];
    pass &= r >= kWorkRatioLow && r <= kWorkRatioHigh;
    ratios += fmt("%s%.3f", ratios.empty() ? "" : ", ", r);
  }
  report(ledger, 5, pass, "total work linear in n",
         fmt("W(2n)/W(n) for n=2^12..2^15, eps=0.5, %zu seeds: [%s] in [%.1f, %.1f]; W/n at 2^15 = %.1f", kWorkSeeds,
             ratios.c_str(), kWorkRatioLow, kWorkRatioHigh, mean.back() / 32768.0),
         since(t0));
}

void criterion_ampc(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t runs = 0, bad = 0, rejected = 0;
  const Memory before = ledger.ampc_memory;
  ledger.ampc_memory = Memory{};
  for (double eps : {0.6, 0.75, 0.8}) {
    for (std::uint64_t sigma : {2u, 4u, 26u}) {
      for (std::uint64_t seed = 0; seed < kSeedsPerConfig; ++seed) {
        const std::uint64_t s = seed * 7919 + sigma;
        ++runs;
        if (!run_and_compare(ledger, gen::random(4096, sigma, s), opts(eps, s), true)) ++bad;
      }
    }
    try {
      solve_mpc(gen::random(4096, 2, 1), opts(eps, 1));
    } catch (const UsageError&) {
      ++rejected;
    }
  }
  const Memory here = ledger.ampc_memory;
  ledger.ampc_memory.c = std::max(before.c, here.c);
  ledger.ampc_memory.c_total = std::max(before.c_total, here.c_total);
  ledger.ampc_memory.runs = before.runs + here.runs;
  report(ledger, 6, bad == 0 && rejected == 3 && here.c <= kMaxMemoryConstant,
         "AMPC at eps in {0.6, 0.75, 0.8}, n=4096",
         fmt("%zu runs, %zu mismatches, observed C=%.2f within cap; MPC rejected %zu/3 with a usage error", runs, bad,
             here.c, rejected),
         since(t0));
}

void criterion_torture(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Family {
    const char* name;
    Text text;
    bool needs_periodic;
  };
  const std::size_t n = 4096;
  const std::array<Family, 4> families{{{"a^n", gen::unary(n), true},
                                        {"(ab)^(n/2)", gen::alternating(n), false},
                                        {"fibonacci", gen::fibonacci(n), true},
                                        {"thue-morse", gen::thue_morse(n), false}}};
  bool pass = true;
  std::string detail;
  for (const Family& f : families) {
    std::size_t periodic = 0;
    bool exact = true;
    for (double eps : {0.3, 0.4, 0.5}) {
      PalindromeRun run;
      exact &= run_and_compare(ledger, f.text, opts(eps, 3), false, &run);
      periodic += run.counters.periodic_cases;
    }
    PalindromeRun run;
    exact &= run_and_compare(ledger, f.text, opts(0.75, 3), true, &run);
    periodic += run.counters.periodic_cases;
    pass &= exact && (!f.needs_periodic || periodic > 0);
    detail += fmt("%s%s %s, periodic=%zu", detail.empty() ? "" : "; ", f.name, exact ? "exact" : "MISMATCH", periodic);
  }
  report(ledger, 7, pass, "periodic torture inputs at n=4096", detail, since(t0));
}

void criterion_fingerprints(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(8);
  const auto scheme = FingerprintScheme::create(256, 26, 2, 8);
  std::size_t splits = 0, broken = 0;
  for (int k = 0; k < 500; ++k) {
    const auto s = rng.letters(rng.between(0, 256), 26);
    const std::span<const Symbol> all(s);
    const Fingerprint w = scheme.of(all);
    for (std::size_t cut = 0; cut <= s.size(); ++cut) {
      const Fingerprint u = scheme.of(all.first(cut)), v = scheme.of(all.subspan(cut));
      ++splits;
      if (!scheme.equal(scheme.solve_third(Missing::Whole, u, v), w) ||
          !scheme.equal(scheme.solve_third(Missing::Left, w, v), u) ||
          !scheme.equal(scheme.solve_third(Missing::Right, w, u), v)) {
        ++broken;
      }
    }
  }

  // Fragment-pair scan: equal fingerprints on unequal fragments.
  std::size_t pair_collisions = 0, fragments = 0;
  const auto wide = FingerprintScheme::create(512, 2, 2, 88);
  for (int k = 0; k < 200; ++k) {
    const auto s = rng.letters(512, 2);
    const FragmentHasher h(wide, s);
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> buckets;
    buckets.reserve(s.size() * s.size() / 2);
    std::array<std::uint64_t, kMaxLayers> val{};
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b <= s.size(); ++b) {
        h.values(a, b, val.data());
        ++fragments;
        auto& bucket = buckets[val[0] * 0x9e3779b97f4a7c15ull ^ val[1] ^ (b - a) << 1];
        for (auto [a2, b2] : bucket) {
          std::array<std::uint64_t, kMaxLayers> other{};
          h.values(a2, b2, other.data());
          if (b2 - a2 == b - a && other[0] == val[0] && other[1] == val[1] &&
              !std::equal(s.begin() + a, s.begin() + b, s.begin() + a2)) {
            ++pair_collisions;
          }
        }
        bucket.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
      }
    }
  }

  // Determinism: same seed, same scheme and same run.
  const auto again = FingerprintScheme::create(256, 26, 2, 8);
  bool deterministic = again.tag() == scheme.tag();
  const Text t = gen::random(2048, 3, 5);
  const auto r1 = solve_mpc(t, opts(0.5, 5)), r2 = solve_mpc(t, opts(0.5, 5));
  deterministic &= r1.stats.total_work == r2.stats.total_work && r1.gather() == r2.gather() &&
                   r1.stats.peak_words == r2.stats.peak_words;

  const bool pass = broken == 0 && pair_collisions == 0 && ledger.collisions == 0 && deterministic;
  report(ledger, 8, pass, "fingerprint round trips, collisions, determinism",
         fmt("%zu splits, %zu broken; %zu fragments scanned, %zu collisions; %zu collision aborts over %zu "
             "distributed runs; deterministic=%s",
             splits, broken, fragments, pair_collisions, ledger.collisions, ledger.distributed_runs,
             deterministic ? "yes" : "no"),
         since(t0));
}

void criterion_facts(Ledger& ledger) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t palindromes = 0, fact1 = 0, fact4 = 0, fact5 = 0, checks = 0;
  for (std::size_t len = 1; len <= kFactsMaxLen; ++len) {
    const std::size_t half = (len + 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << half); ++mask) {
      std::vector<Symbol> p(len);
      for (std::size_t k = 0; k < half; ++k) p[k] = p[len - 1 - k] = static_cast<Symbol>((mask >> k) & 1);
      ++palindromes;
      for (std::size_t u = 0; u < len; ++u) {
        ++checks;
        if (has_period(p, len - u) != is_palindrome(std::span<const Symbol>(p).first(u))) ++fact1;
      }
      for (std::size_t per = 1; per <= len; ++per) {
        if (!has_period(p, per)) continue;
        for (Symbol c : {0u, 1u}) {
          for (Symbol c2 : {0u, 1u}) {
            std::vector<Symbol> s{c};
            s.insert(s.end(), p.begin(), p.end());
            s.push_back(c2);
            const std::span<const Symbol> all(s);
            checks += 2;
            if (has_period(all, per) && !is_palindrome(all)) ++fact4;
            if (has_period(all.first(s.size() - 1), per) && !has_period(all.subspan(1), per) && is_palindrome(all)) {
              ++fact5;
            }
          }
        }
      }
    }
  }
  report(ledger, 9, fact1 + fact4 + fact5 == 0, "palindrome/period facts on binary palindromes up to 14",
         fmt("%zu palindromes, %zu checks; violations: prefix/period %zu, extension %zu, maximality %zu",
             palindromes, checks, fact1, fact4, fact5),
         since(t0));
}

}  // namespace

int main() {
  Ledger ledger;
  criterion_oracle_equivalence(ledger);
  criterion_exhaustive_lemma(ledger);
  criterion_rounds(ledger);
  criterion_work(ledger);
  criterion_ampc(ledger);
  criterion_torture(ledger);
  criterion_memory(ledger);
  criterion_fingerprints(ledger);
  criterion_facts(ledger);
  std::printf("%s: %d criteria failed\n", ledger.failures == 0 ? "ALL PASS" : "FAILURES", ledger.failures);
  return ledger.failures == 0 ? 0 : 1;
}
