#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "palmpc/pipeline.hpp"
#include "palmpc/strings.hpp"

namespace palmpc::cli {

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2, kCollision = 3, kRuntime = 4 };

enum class Mode { Mpc, Ampc, Sequential, Oracle };

Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

struct InputSpec {
  std::string kind;  // file | random | unary | fibonacci | thue-morse
  std::string path;
  std::size_t n = 0;
  std::uint64_t sigma = 0;
  std::string alphabet;  // restricts file input when non-empty
};

/// Loaded text plus the characters used to print substrings.
struct Input {
  Text text;
  InputSpec spec;
  std::string glyphs;  // glyphs[symbol]; empty means raw bytes
};

Input load_input(const InputSpec& spec, std::uint64_t seed);

struct RunReport {
  Mode mode = Mode::Sequential;
  InputSpec input;
  std::size_t n = 0;
  std::uint64_t sigma = 0;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  LpsResult lps;
  std::optional<std::string> substring;
  std::optional<PalindromeRun> run;        // distributed modes
  std::optional<std::uint64_t> local_work;  // sequential mode
  std::optional<double> wall_ms;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

struct Outcome {
  RunReport report;
  PalindromeTable table;
};

Outcome execute(const Input& input, Mode mode, const SolveOptions& options, bool timing);

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace palmpc::cli
