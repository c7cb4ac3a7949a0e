#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "palmpc/ampc.hpp"
#include "palmpc/errors.hpp"
#include "palmpc/generators.hpp"
#include "palmpc/mpc.hpp"
#include "palmpc/oracle.hpp"

namespace palmpc::cli {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxSubstring = 64;

template <class T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("PALMPC_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw UsageError(std::string("PALMPC_SEED is not an unsigned integer: ") + s);
    }
  }
  return 0;
}

std::string render(const Input& in, LpsResult lps) {
  std::string out;
  for (std::size_t k = lps.start; k < lps.start + lps.length; ++k) {
    const Symbol c = in.text[k];
    out.push_back(in.glyphs.empty() ? static_cast<char>(c) : in.glyphs[c]);
  }
  return out;
}

std::string letters_glyphs(std::uint64_t sigma) {
  if (sigma > 26) return {};
  std::string g;
  for (std::uint64_t c = 0; c < sigma; ++c) g.push_back(static_cast<char>('a' + c));
  return g;
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "mpc") return Mode::Mpc;
  if (s == "ampc") return Mode::Ampc;
  if (s == "sequential") return Mode::Sequential;
  if (s == "oracle") return Mode::Oracle;
  throw UsageError("unknown mode '" + s + "' (mpc, ampc, sequential, oracle)");
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::Mpc: return "mpc";
    case Mode::Ampc: return "ampc";
    case Mode::Sequential: return "sequential";
    case Mode::Oracle: return "oracle";
  }
  return "?";
}

Input load_input(const InputSpec& spec, std::uint64_t seed) {
  Input in;
  in.spec = spec;
  if (spec.kind == "file") {
    std::ifstream f(spec.path, std::ios::binary);
    if (!f) throw UsageError("cannot read input file '" + spec.path + "'");
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (bytes.empty()) throw UsageError("input file '" + spec.path + "' is empty");
    if (spec.alphabet.empty()) {
      in.text = Text::from_bytes(bytes);
    } else {
      std::vector<Symbol> letters;
      letters.reserve(bytes.size());
      for (std::size_t i = 0; i < bytes.size(); ++i) {
        const auto at = spec.alphabet.find(bytes[i]);
        if (at == std::string::npos) {
          throw UsageError("byte " + std::to_string(static_cast<unsigned char>(bytes[i])) + " at offset " +
                           std::to_string(i) + " is outside --alphabet");
        }
        letters.push_back(static_cast<Symbol>(at));
      }
      in.text = Text(std::move(letters), spec.alphabet.size());
      in.glyphs = spec.alphabet;
    }
  } else {
    if (spec.n == 0) throw UsageError("generated input needs n >= 1");
    if (spec.kind == "random") {
      in.text = gen::random(spec.n, spec.sigma, seed);
    } else if (spec.kind == "unary") {
      in.text = gen::unary(spec.n);
    } else if (spec.kind == "fibonacci") {
      in.text = gen::fibonacci(spec.n);
    } else if (spec.kind == "thue-morse") {
      in.text = gen::thue_morse(spec.n);
    } else {
      throw UsageError("unknown input kind '" + spec.kind + "'");
    }
    in.glyphs = letters_glyphs(in.text.sigma());
  }
  in.spec.n = in.text.size();
  in.spec.sigma = in.text.sigma();
  return in;
}

Outcome execute(const Input& input, Mode mode, const SolveOptions& options, bool timing) {
  Outcome out;
  RunReport& r = out.report;
  r.mode = mode;
  r.input = input.spec;
  r.n = input.text.size();
  r.sigma = input.text.sigma();
  r.seed = options.seed;
  const auto t0 = std::chrono::steady_clock::now();
  switch (mode) {
    case Mode::Mpc:
    case Mode::Ampc: {
      r.epsilon = options.epsilon;
      PalindromeRun run = mode == Mode::Mpc ? solve_mpc(input.text, options) : solve_ampc(input.text, options);
      out.table = run.gather();
      r.lps = run.lps;
      r.run = std::move(run);
      break;
    }
    case Mode::Sequential: {
      OpTally tally;
      out.table = manacher(input.text.view(), &tally);
      r.lps = longest_palindrome(out.table);
      r.local_work = tally.ops;
      break;
    }
    case Mode::Oracle:
      out.table = oracle::maximal_palindromes(input.text.view());
      r.lps = oracle::lps(input.text.view());
      break;
  }
  if (timing) {
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  const bool printable = !input.glyphs.empty() || input.spec.kind == "file";
  if (r.lps.length <= kMaxSubstring && printable) r.substring = render(input, r.lps);
  return out;
}

ordered_json RunReport::to_json() const {
  ordered_json j;
  j["mode"] = mode_name(mode);
  j["input"] = {{"kind", input.kind},
                {"path", input.kind == "file" ? ordered_json(input.path) : ordered_json(nullptr)},
                {"n", n},
                {"sigma", sigma}};
  j["epsilon"] = opt(epsilon);
  j["seed"] = seed;
  j["lps"] = {{"start", lps.start}, {"length", lps.length}, {"substring", opt(substring)}};
  const PalindromeRun* d = run ? &*run : nullptr;
  auto field = [&](auto get) { return d ? ordered_json(get(*d)) : ordered_json(nullptr); };
  j["rounds"] = field([](const PalindromeRun& x) { return x.stats.rounds; });
  j["machines"] = field([](const PalindromeRun& x) { return x.config.machine_count; });
  j["block_length"] = field([](const PalindromeRun& x) { return x.config.block_len; });
  j["memory_constant"] = field([](const PalindromeRun& x) { return x.config.memory_constant; });
  j["memory_cap_words"] = field([](const PalindromeRun& x) { return x.config.memory_cap_words; });
  j["peak_machine_words"] = field([](const PalindromeRun& x) { return x.stats.peak_machine_words; });
  j["per_machine_peak_words"] = field([](const PalindromeRun& x) { return x.stats.peak_words; });
  j["total_memory_words"] = field([](const PalindromeRun& x) { return x.stats.total_memory_words; });
  j["observed_memory_constant"] = field([](const PalindromeRun& x) {
    return static_cast<double>(x.stats.peak_machine_words) / static_cast<double>(x.config.block_len);
  });
  j["observed_total_constant"] = field([](const PalindromeRun& x) {
    return static_cast<double>(x.stats.total_memory_words) / static_cast<double>(x.config.n);
  });
  if (d) {
    j["total_work"] = d->stats.total_work;
  } else {
    j["total_work"] = opt(local_work);
  }
  j["message_words"] = field([](const PalindromeRun& x) { return x.stats.message_words; });
  j["shared_reads"] = field([](const PalindromeRun& x) { return x.stats.shared_reads; });
  j["lcp_queries"] = field([](const PalindromeRun& x) { return x.counters.lcp_queries; });
  j["periodic_cases"] = field([](const PalindromeRun& x) { return x.counters.periodic_cases; });
  j["wall_time_ms"] = opt(wall_ms);
  return j;
}

std::string RunReport::to_text() const {
  std::ostringstream o;
  o << "mode            " << mode_name(mode) << '\n';
  o << "input           " << input.kind << (input.kind == "file" ? " " + input.path : "") << " (n=" << n
    << ", sigma=" << sigma << ")\n";
  if (epsilon) o << "epsilon         " << *epsilon << '\n';
  o << "seed            " << seed << '\n';
  o << "lps             start=" << lps.start << " length=" << lps.length;
  if (substring) o << " \"" << *substring << '"';
  o << '\n';
  if (run) {
    const auto& s = run->stats;
    const auto& c = run->config;
    o << "rounds          " << s.rounds << '\n';
    o << "machines        " << c.machine_count << " x " << c.memory_cap_words << " words (block length "
      << c.block_len << ")\n";
    o << "peak memory     " << s.peak_machine_words << " words/machine (C = " << std::fixed
      << std::setprecision(2) << static_cast<double>(s.peak_machine_words) / static_cast<double>(c.block_len)
      << ")\n";
    o << "total memory    " << s.total_memory_words << " words (C' = "
      << static_cast<double>(s.total_memory_words) / static_cast<double>(c.n) << ")\n";
    o.unsetf(std::ios::floatfield);
    o << "total work      " << s.total_work << '\n';
    o << "message words   " << s.message_words << '\n';
    if (c.model == engine::Model::Ampc) o << "shared reads    " << s.shared_reads << '\n';
    o << "lcp queries     " << run->counters.lcp_queries << " (periodic superblocks: " << run->counters.periodic_cases
      << ")\n";
  } else if (local_work) {
    o << "total work      " << *local_work << '\n';
  }
  if (wall_ms) o << "wall time       " << std::fixed << std::setprecision(3) << *wall_ms << " ms\n";
  return o.str();
}

namespace {

struct Settings {
  std::string input_path;
  std::vector<std::uint64_t> random;
  std::size_t unary = 0;
  std::size_t fibonacci = 0;
  std::size_t thue_morse = 0;
  std::string alphabet;
  std::optional<std::uint64_t> seed;
  std::string mode = "mpc";
  std::vector<double> epsilons{0.5};
  std::size_t memory_constant = 64;
  std::size_t layers = 2;
  std::size_t threads = 1;
  std::string format = "text";
  bool timing = false;
  std::vector<std::size_t> exhaustive;
  std::vector<std::size_t> sizes;
  std::size_t reps = 1;
  std::uint64_t bench_sigma = 4;
};

void add_input_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("--input", s.input_path, "Read raw bytes from a file");
  cmd->add_option("--random", s.random, "Uniform random string: N SIGMA")->expected(2);
  cmd->add_option("--unary", s.unary, "a^N");
  cmd->add_option("--fibonacci", s.fibonacci, "Fibonacci word prefix of length N");
  cmd->add_option("--thue-morse", s.thue_morse, "Thue-Morse prefix of length N");
  cmd->add_option("--alphabet", s.alphabet, "Allowed characters of file input, in symbol order");
}

void add_run_options(CLI::App* cmd, Settings& s, bool epsilon_list) {
  cmd->add_option("--seed", s.seed, "Generator and fingerprint seed (default: $PALMPC_SEED or 0)");
  cmd->add_option("--mode", s.mode, "mpc | ampc | sequential | oracle");
  if (epsilon_list) {
    cmd->add_option("--epsilon", s.epsilons, "Comma-separated epsilon values")->delimiter(',');
  } else {
    cmd->add_option("--epsilon", s.epsilons, "Machines ~ n^epsilon, memory ~ n^(1-epsilon)")->expected(1);
  }
  cmd->add_option("--memory-constant", s.memory_constant, "C in the per-machine cap C * n^(1-epsilon)");
  cmd->add_option("--layers", s.layers, "Fingerprint layers (1-4)");
  cmd->add_option("--threads", s.threads, "Worker threads for the simulator");
  cmd->add_option("--format", s.format, "text | json");
  cmd->add_flag("--timing", s.timing, "Include wall-clock time");
}

InputSpec input_spec(const Settings& s) {
  std::vector<InputSpec> given;
  if (!s.input_path.empty()) given.push_back({"file", s.input_path, 0, 0, s.alphabet});
  if (!s.random.empty()) given.push_back({"random", "", s.random[0], s.random[1], ""});
  if (s.unary) given.push_back({"unary", "", s.unary, 1, ""});
  if (s.fibonacci) given.push_back({"fibonacci", "", s.fibonacci, 2, ""});
  if (s.thue_morse) given.push_back({"thue-morse", "", s.thue_morse, 2, ""});
  if (given.size() != 1) {
    throw UsageError("give exactly one input: --input, --random, --unary, --fibonacci or --thue-morse");
  }
  if (!s.alphabet.empty() && given[0].kind != "file") throw UsageError("--alphabet applies to --input only");
  return given[0];
}

SolveOptions solve_options(const Settings& s, double epsilon, std::uint64_t seed) {
  if (s.format != "text" && s.format != "json") throw UsageError("--format must be text or json");
  SolveOptions o;
  o.epsilon = epsilon;
  o.memory_constant = s.memory_constant;
  o.layers = s.layers;
  o.seed = seed;
  o.threads = s.threads;
  return o;
}

// Validates epsilon against the mode before any input is touched.
void check_epsilon(Mode mode, double eps) {
  if (mode == Mode::Mpc) engine::ClusterConfig::make(1, eps, engine::Model::Mpc);
  if (mode == Mode::Ampc) engine::ClusterConfig::make(1, eps, engine::Model::Ampc);
}

std::optional<Center> first_difference(const PalindromeTable& got, const PalindromeTable& want) {
  if (got.text_size() != want.text_size()) return Center{0};
  for (std::size_t u = 0; u + 1 < 2 * want.text_size(); ++u) {
    if (got.at(Center{u}) != want.at(Center{u})) return Center{u};
  }
  return std::nullopt;
}

int cmd_solve(const Settings& s, std::ostream& out) {
  const Mode mode = parse_mode(s.mode);
  const double eps = s.epsilons.at(0);
  check_epsilon(mode, eps);
  const std::uint64_t seed = s.seed.value_or(default_seed());
  const SolveOptions options = solve_options(s, eps, seed);
  const Input in = load_input(input_spec(s), seed);
  const Outcome o = execute(in, mode, options, s.timing);
  if (s.format == "json") {
    out << o.report.to_json().dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  } else {
    out << o.report.to_text();
  }
  return kOk;
}

struct Verdict {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  std::string first_failure;
};

void verify_one(const Input& in, Mode mode, const SolveOptions& options, Verdict& v) {
  const Outcome o = execute(in, mode, options, false);
  const PalindromeTable want = oracle::maximal_palindromes(in.text.view());
  const LpsResult want_lps = oracle::lps(in.text.view());
  ++v.checked;
  std::string why;
  if (auto c = first_difference(o.table, want)) {
    why = "half-index " + std::to_string(c->half_index) + ": got " + std::to_string(o.table.at(*c)) +
          ", expected " + std::to_string(want.at(*c));
  } else if (!(o.report.lps == want_lps)) {
    why = "lps (" + std::to_string(o.report.lps.start) + ", " + std::to_string(o.report.lps.length) +
          "), expected (" + std::to_string(want_lps.start) + ", " + std::to_string(want_lps.length) + ")";
  }
  if (!why.empty()) {
    if (v.mismatches++ == 0) {
      std::string letters;
      if (in.text.size() <= kMaxSubstring) {
        for (std::size_t k = 0; k < in.text.size(); ++k) {
          letters.push_back(in.glyphs.empty() ? static_cast<char>(in.text[k]) : in.glyphs[in.text[k]]);
        }
        letters = " on \"" + letters + "\"";
      }
      v.first_failure = why + letters;
    }
  }
}

int cmd_verify(const Settings& s, std::ostream& out) {
  const Mode mode = parse_mode(s.mode);
  const double eps = s.epsilons.at(0);
  check_epsilon(mode, eps);
  const std::uint64_t seed = s.seed.value_or(default_seed());
  const SolveOptions options = solve_options(s, eps, seed);
  Verdict v;
  std::string what;
  if (!s.exhaustive.empty()) {
    const std::size_t max_len = s.exhaustive[0];
    const std::uint64_t sigma = s.exhaustive[1];
    if (max_len == 0 || sigma == 0) throw UsageError("--exhaustive needs L >= 1 and SIGMA >= 1");
    for (std::size_t len = 1; len <= max_len; ++len) {
      gen::StringOdometer odo(len, sigma);
      do {
        Input in{Text(odo.letters(), sigma), {"exhaustive", "", len, sigma, ""}, letters_glyphs(sigma)};
        verify_one(in, mode, options, v);
      } while (odo.next());
    }
    what = "exhaustive L<=" + std::to_string(max_len) + " sigma=" + std::to_string(sigma);
  } else {
    const Input in = load_input(input_spec(s), seed);
    verify_one(in, mode, options, v);
    what = in.spec.kind + " n=" + std::to_string(in.text.size());
  }
  const bool pass = v.mismatches == 0;
  if (s.format == "json") {
    ordered_json j;
    j["result"] = pass ? "PASS" : "FAIL";
    j["mode"] = mode_name(mode);
    j["epsilon"] = mode == Mode::Mpc || mode == Mode::Ampc ? ordered_json(eps) : ordered_json(nullptr);
    j["seed"] = seed;
    j["inputs"] = what;
    j["checked"] = v.checked;
    j["mismatches"] = v.mismatches;
    j["first_failure"] = pass ? ordered_json(nullptr) : ordered_json(v.first_failure);
    out << j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  } else {
    out << (pass ? "PASS" : "FAIL") << " mode=" << mode_name(mode);
    if (mode == Mode::Mpc || mode == Mode::Ampc) out << " epsilon=" << eps;
    out << " " << what << " checked=" << v.checked << " mismatches=" << v.mismatches << '\n';
    if (!pass) out << "first failure: " << v.first_failure << '\n';
  }
  return pass ? kOk : kMismatch;
}

int cmd_bench(const Settings& s, std::ostream& out) {
  if (s.sizes.empty()) throw UsageError("--sizes needs at least one size");
  if (s.epsilons.empty()) throw UsageError("--epsilon needs at least one value");
  if (s.reps == 0) throw UsageError("--reps must be positive");
  const Mode mode = parse_mode(s.mode);
  for (double eps : s.epsilons) check_epsilon(mode, eps);
  const std::uint64_t seed = s.seed.value_or(default_seed());
  ordered_json rows = ordered_json::array();
  std::ostringstream table;
  table << std::left << std::setw(8) << "n" << std::setw(9) << "epsilon" << std::setw(5) << "rep" << std::setw(8)
        << "rounds" << std::setw(10) << "machines" << std::setw(8) << "block" << std::setw(12) << "peak" << std::setw(8)
        << "C" << std::setw(14) << "total" << std::setw(14) << "work" << std::setw(10) << "work/n";
  if (s.timing) table << "ms";
  table << '\n';
  for (std::size_t n : s.sizes) {
    if (n == 0) throw UsageError("sizes must be positive");
    for (double eps : s.epsilons) {
      for (std::size_t rep = 0; rep < s.reps; ++rep) {
        const std::uint64_t run_seed = seed + rep;
        const Input in = load_input({"random", "", n, s.bench_sigma, ""}, run_seed);
        const Outcome o = execute(in, mode, solve_options(s, eps, run_seed), s.timing);
        const RunReport& r = o.report;
        rows.push_back(r.to_json());
        auto cell = [](std::optional<std::uint64_t> v) { return v ? std::to_string(*v) : std::string("-"); };
        const PalindromeRun* d = r.run ? &*r.run : nullptr;
        const std::uint64_t work = d ? d->stats.total_work : r.local_work.value_or(0);
        std::ostringstream c;
        if (d) {
          c << std::fixed << std::setprecision(2)
            << static_cast<double>(d->stats.peak_machine_words) / static_cast<double>(d->config.block_len);
        }
        std::ostringstream wn;
        wn << std::fixed << std::setprecision(2) << static_cast<double>(work) / static_cast<double>(n);
        table << std::left << std::setw(8) << n << std::setw(9) << (d ? std::to_string(eps).substr(0, 4) : "-")
              << std::setw(5) << rep << std::setw(8) << cell(d ? std::optional<std::uint64_t>(d->stats.rounds) : std::nullopt)
              << std::setw(10) << cell(d ? std::optional<std::uint64_t>(d->config.machine_count) : std::nullopt)
              << std::setw(8) << cell(d ? std::optional<std::uint64_t>(d->config.block_len) : std::nullopt)
              << std::setw(12) << cell(d ? std::optional<std::uint64_t>(d->stats.peak_machine_words) : std::nullopt)
              << std::setw(8) << (d ? c.str() : "-") << std::setw(14)
              << cell(d ? std::optional<std::uint64_t>(d->stats.total_memory_words) : std::nullopt) << std::setw(14)
              << work << std::setw(10) << wn.str();
        if (r.wall_ms) table << std::fixed << std::setprecision(3) << *r.wall_ms;
        table << '\n';
      }
    }
  }
  if (s.format == "json") {
    out << rows.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  } else {
    out << "mode " << mode_name(mode) << ", random inputs over sigma=" << s.bench_sigma << ", seed " << seed << '\n'
        << table.str();
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"All maximal palindromes and the longest palindromic substring on a simulated MPC / AMPC cluster",
               "palmpc"};
  app.require_subcommand(1);
  CLI::App* solve = app.add_subcommand("solve", "Solve one input and print a report");
  CLI::App* verify = app.add_subcommand("verify", "Check a mode against the brute-force oracle");
  CLI::App* bench = app.add_subcommand("bench", "Resource table over sizes and epsilon values");
  for (CLI::App* cmd : {solve, verify}) {
    add_input_options(cmd, s);
    add_run_options(cmd, s, false);
  }
  verify->add_option("--exhaustive", s.exhaustive, "Every string of length 1..L over SIGMA letters: L SIGMA")
      ->expected(2);
  add_run_options(bench, s, true);
  bench->add_option("--sizes", s.sizes, "Comma-separated string lengths")->delimiter(',')->required();
  bench->add_option("--reps", s.reps, "Repetitions per (n, epsilon), seeds seed..seed+reps-1");
  bench->add_option("--sigma", s.bench_sigma, "Alphabet size of the random inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (*solve) return cmd_solve(s, out);
    if (*verify) return cmd_verify(s, out);
    return cmd_bench(s, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CollisionDetected& e) {
    err << "fingerprint collision, rerun with another --seed: " << e.what() << '\n';
    return kCollision;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace palmpc::cli
