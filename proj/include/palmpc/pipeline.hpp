#pragma once

// Types shared by the MPC and AMPC drivers.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "palmpc/engine.hpp"
#include "palmpc/strings.hpp"

namespace palmpc {

struct SolveOptions {
  double epsilon = 0.5;
  std::size_t memory_constant = 64;
  std::size_t layers = 2;  // fingerprint layers
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Instrumentation summed over all machines.
struct PipelineCounters {
  std::size_t lcp_queries = 0;
  std::size_t max_queries_per_machine = 0;
  std::size_t empty_cases = 0;
  std::size_t single_cases = 0;
  std::size_t periodic_cases = 0;
  std::size_t case_a_centers = 0;
  std::size_t case_b_centers = 0;
  std::size_t letter_fetches = 0;  // letters shipped to resolve mismatch windows
  std::size_t max_reads_per_query = 0;  // AMPC only
};

/// Final lengths of the centers a machine owns, half-indices [center_begin, ...).
struct TableSlice {
  std::size_t center_begin = 0;
  std::vector<std::size_t> lengths;
};

struct PalindromeRun {
  engine::ClusterConfig config;
  engine::RunStats stats;
  PipelineCounters counters;
  LpsResult lps;
  std::vector<TableSlice> slices;  // indexed by machine

  /// Whole-table export. Runs outside the metered simulation.
  PalindromeTable gather() const;
};

}  // namespace palmpc
