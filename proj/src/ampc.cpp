#include "palmpc/ampc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detail/center_work.hpp"
#include "detail/records.hpp"
#include "palmpc/errors.hpp"

namespace palmpc {

using detail::Outbox;
using detail::Rec;
using engine::MachineId;
using engine::Word;

namespace {

std::vector<Word> encode(const Fingerprint& fp, std::size_t layers) {
  std::vector<Word> out;
  out.reserve(3 * layers + 1);
  out.push_back(fp.length);
  for (std::size_t l = 0; l < layers; ++l) out.push_back(fp.value[l]);
  for (std::size_t l = 0; l < layers; ++l) out.push_back(fp.power[l]);
  for (std::size_t l = 0; l < layers; ++l) out.push_back(fp.inverse_power[l]);
  return out;
}

Fingerprint decode(const std::vector<Word>& w, const FingerprintScheme& scheme) {
  const std::size_t layers = scheme.layers();
  if (w.size() != 3 * layers + 1) throw std::logic_error("malformed fingerprint entry");
  Fingerprint fp = scheme.empty();
  fp.length = w[0];
  for (std::size_t l = 0; l < layers; ++l) {
    fp.value[l] = w[1 + l];
    fp.power[l] = w[1 + layers + l];
    fp.inverse_power[l] = w[1 + 2 * layers + l];
  }
  return fp;
}

struct Machine {
  std::vector<Symbol> block;
  detail::CenterWork work;
  std::size_t max_reads_per_query = 0;
  LpsResult lps;

  std::size_t words() const { return 2 + block.size() + work.words(); }
};

using Ctx = engine::MachineContext<Machine>;

std::size_t ceil_log(std::size_t base, std::size_t x) {
  std::size_t d = 0;
  for (std::size_t reach = 1; reach < x; reach *= base) ++d;
  return d;
}

}  // namespace

AmpcLcp ampc_lcp(std::size_t i, std::size_t j, std::size_t limit, std::size_t n, const FingerprintScheme& scheme,
                 const PrefixReader& prefix) {
  if (i > 2 * n || j > 2 * n) throw UsageError("LCP query position beyond S'");
  AmpcLcp out;
  const std::size_t hi_bound = std::min(limit, 2 * n - std::max(i, j));
  if (i == j || hi_bound == 0) {
    out.length = hi_bound;
    return out;
  }
  auto read = [&](std::size_t q) {
    ++out.reads;
    return prefix(q);
  };
  const Fingerprint before_i = i == 0 ? scheme.empty() : read(i - 1);
  const Fingerprint before_j = j == 0 ? scheme.empty() : read(j - 1);
  auto fragment = [&](std::size_t start, const Fingerprint& before, std::size_t len) {
    return scheme.solve_third(Missing::Right, read(start + len - 1), before);
  };
  // Invariant: the first lo symbols agree; more than hi do not.
  std::size_t lo = 0, hi = hi_bound;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (scheme.equal(fragment(i, before_i, mid), fragment(j, before_j, mid))) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  out.length = lo;
  return out;
}

struct AmpcPipeline::Impl {
  std::size_t n;
  BlockPlan plan;
  FingerprintScheme scheme;
  std::size_t layers;
  std::size_t s;      // fanout
  std::size_t depth;  // prefix-tree levels above the leaves
  std::size_t reduce;
  engine::Cluster<Machine> cluster;
  bool built = false;

  Impl(const Text& text, const SolveOptions& opt, const engine::ClusterConfig& cfg)
      : n(text.size()),
        plan(plan_decomposition(cfg)),
        scheme(FingerprintScheme::create(text.size(), text.sigma(), opt.layers, opt.seed)),
        layers(opt.layers),
        s(std::max<std::size_t>(2, cfg.block_len)),
        cluster(cfg, initial_states(text, cfg)) {
    // Pad to a bound that depends on epsilon alone so the round count does
    // not drift with n.
    const double ratio = cfg.epsilon / (1.0 - cfg.epsilon);
    const auto whole = static_cast<std::size_t>(std::floor(ratio + 1e-9));
    const auto up = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
    depth = std::max(ceil_log(s, leaves()), whole + 1);
    reduce = std::max(ceil_log(s, machines()), up);
  }

  static std::vector<Machine> initial_states(const Text& text, const engine::ClusterConfig& cfg) {
    const BlockPlan plan = plan_decomposition(cfg);
    std::vector<Machine> states(cfg.machine_count);
    for (std::size_t m = 0; m < states.size(); ++m) {
      const auto letters = text.view().subspan(plan.block_begin(m), plan.block_end(m) - plan.block_begin(m));
      states[m].block.assign(letters.begin(), letters.end());
      states[m].work = detail::CenterWork(plan.assignments[m], plan.n, plan.block_len);
    }
    return states;
  }

  std::size_t machines() const { return plan.machine_count; }
  std::size_t leaves() const { return 2 * machines(); }
  std::size_t nodes_at(std::size_t level, std::size_t base_count) const {
    std::size_t c = base_count;
    for (std::size_t l = 0; l < level; ++l) c = (c + s - 1) / s;
    return c;
  }

  // Leaf g covers block g of S for g < B, else the reversal of block 2B-1-g.
  std::size_t leaf_of(std::size_t m, bool reversed) const { return reversed ? leaves() - 1 - m : m; }

  Fingerprint read_fp(Ctx& ctx, std::uint64_t key) const {
    const std::vector<Word>* w = ctx.read(key);
    if (w == nullptr) throw std::logic_error("shared-store entry missing");
    return decode(*w, scheme);
  }

  void round_leaves(Ctx& ctx) const {
    Machine& st = ctx.state();
    const std::size_t m = ctx.id();
    Outbox out(machines());
    detail::send_segment_blocks(plan, m, st.block, out);
    out.flush(ctx);
    ctx.tally(2 * st.block.size());
    ctx.write(ampc_key::make(ampc_key::kTree, 0, leaf_of(m, false)), encode(scheme.of(st.block), layers));
    ctx.write(ampc_key::make(ampc_key::kTree, 0, leaf_of(m, true)), encode(scheme.of_reversed(st.block), layers));
  }

  void round_level(Ctx& ctx, std::size_t level) const {
    const std::size_t count = nodes_at(level, leaves());
    const std::size_t below = nodes_at(level - 1, leaves());
    for (std::size_t j = ctx.id(); j < count; j += machines()) {
      Fingerprint acc = scheme.empty();
      for (std::size_t c = j * s; c < std::min(below, (j + 1) * s); ++c) {
        acc = scheme.concat(acc, read_fp(ctx, ampc_key::make(ampc_key::kTree, level - 1, c)));
        ctx.tally(layers);
      }
      ctx.write(ampc_key::make(ampc_key::kTree, level, j), encode(acc, layers));
    }
  }

  void absorb_blocks(Ctx& ctx) const {
    detail::for_each_record(ctx.inbox(), [&](MachineId, Rec kind, std::span<const Word> f) {
      if (kind != Rec::Block) throw std::logic_error("unexpected record");
      ctx.state().work.receive(f[0], f.subspan(1));
      ctx.tally(f.size());
    });
  }

  // phi(S'[0, start of leaf g)) from the left siblings along g's root path.
  Fingerprint left_context(Ctx& ctx, std::size_t g) const {
    Fingerprint acc = scheme.empty();
    for (std::size_t level = depth; level-- > 0;) {
      std::size_t span = 1;
      for (std::size_t l = 0; l < level && span <= g; ++l) span *= s;
      const std::size_t a = g / span;
      for (std::size_t j = a - a % s; j < a; ++j) {
        acc = scheme.concat(acc, read_fp(ctx, ampc_key::make(ampc_key::kTree, level, j)));
        ctx.tally(layers);
      }
    }
    return acc;
  }

  void round_downsweep(Ctx& ctx) const {
    Machine& st = ctx.state();
    const std::size_t m = ctx.id();
    for (bool reversed : {false, true}) {
      const std::size_t g = leaf_of(m, reversed);
      Fingerprint acc = left_context(ctx, g);
      const std::size_t first = reversed ? 2 * n - plan.block_end(m) : plan.block_begin(m);
      for (std::size_t k = 0; k < st.block.size(); ++k) {
        const Symbol c = reversed ? st.block[st.block.size() - 1 - k] : st.block[k];
        acc = scheme.concat(acc, scheme.of_symbol(c));
        ctx.tally(layers);
        ctx.write(ampc_key::make(ampc_key::kPrefix, 0, first + k), encode(acc, layers));
      }
    }
    st.block = {};
  }

  AmpcLcp lcp_in_round(Ctx& ctx, const LcpQuery& q) const {
    const AmpcLcp r = ampc_lcp(q.first, q.second, q.limit, n, scheme, [&](std::size_t pos) {
      return read_fp(ctx, ampc_key::make(ampc_key::kPrefix, 0, pos));
    });
    ctx.tally(r.reads * layers);
    ctx.state().max_reads_per_query = std::max(ctx.state().max_reads_per_query, r.reads);
    return r;
  }

  std::vector<std::size_t> answer_all(Ctx& ctx, const std::vector<LcpQuery>& qs) const {
    if (qs.size() > 3) throw std::logic_error("more than 3 LCP queries on one machine");
    std::vector<std::size_t> out;
    for (const LcpQuery& q : qs) out.push_back(lcp_in_round(ctx, q).length);
    return out;
  }

  void round_queries(Ctx& ctx) const {
    detail::CenterWork& work = ctx.state().work;
    const std::vector<std::size_t> first = answer_all(ctx, work.first_wave());
    const std::vector<std::size_t> second = answer_all(ctx, work.second_wave(first));
    work.finish(second, ctx.tally());
    const LpsResult best = work.best();
    ctx.write(ampc_key::make(ampc_key::kBest, 0, ctx.id()), {best.start, best.length});
  }

  void round_reduce(Ctx& ctx, std::size_t level) const {
    const std::size_t count = nodes_at(level, machines());
    const std::size_t below = nodes_at(level - 1, machines());
    for (std::size_t j = ctx.id(); j < count; j += machines()) {
      LpsResult best;
      for (std::size_t c = j * s; c < std::min(below, (j + 1) * s); ++c) {
        const std::vector<Word>* w = ctx.read(ampc_key::make(ampc_key::kBest, level - 1, c));
        if (w == nullptr) throw std::logic_error("missing reduction entry");
        const LpsResult r{(*w)[0], (*w)[1]};
        if (r.length > best.length || (r.length == best.length && r.start < best.start)) best = r;
      }
      ctx.write(ampc_key::make(ampc_key::kBest, level, j), {best.start, best.length});
    }
  }

  void build() {
    if (built) throw std::logic_error("prefix fingerprints already built");
    cluster.run_round([&](Ctx& ctx) { round_leaves(ctx); });
    for (std::size_t level = 1; level <= depth; ++level) {
      cluster.run_round([&](Ctx& ctx) {
        if (level == 1) {
          absorb_blocks(ctx);
          ctx.state().work.local_phase(ctx.tally());
        }
        round_level(ctx, level);
      });
    }
    cluster.run_round([&](Ctx& ctx) { round_downsweep(ctx); });
    built = true;
  }
};

AmpcPipeline::AmpcPipeline(const Text& text, const SolveOptions& options) {
  if (text.empty()) throw UsageError("text must be non-empty");
  engine::ClusterConfig cfg = engine::ClusterConfig::make(text.size(), options.epsilon, engine::Model::Ampc,
                                                          options.memory_constant, options.seed);
  cfg.threads = options.threads;
  impl_ = std::make_unique<Impl>(text, options, cfg);
}

AmpcPipeline::~AmpcPipeline() = default;
AmpcPipeline::AmpcPipeline(AmpcPipeline&&) noexcept = default;
AmpcPipeline& AmpcPipeline::operator=(AmpcPipeline&&) noexcept = default;

const engine::ClusterConfig& AmpcPipeline::config() const noexcept { return impl_->cluster.config(); }
const BlockPlan& AmpcPipeline::plan() const noexcept { return impl_->plan; }
const FingerprintScheme& AmpcPipeline::scheme() const noexcept { return impl_->scheme; }
const engine::RunStats& AmpcPipeline::stats() const noexcept { return impl_->cluster.stats(); }
std::size_t AmpcPipeline::fanout() const noexcept { return impl_->s; }
std::size_t AmpcPipeline::tree_depth() const noexcept { return impl_->depth; }
std::size_t AmpcPipeline::reduce_depth() const noexcept { return impl_->reduce; }

void AmpcPipeline::build_prefix_fingerprints() { impl_->build(); }

Fingerprint AmpcPipeline::prefix(std::size_t q) const {
  const std::vector<Word>* w = impl_->cluster.shared().find(ampc_key::make(ampc_key::kPrefix, 0, q));
  if (w == nullptr) throw UsageError("no prefix fingerprint stored at " + std::to_string(q));
  return decode(*w, impl_->scheme);
}

std::vector<std::vector<AmpcLcp>> AmpcPipeline::answer_lcp(const std::vector<std::vector<LcpQuery>>& queries) {
  Impl& im = *impl_;
  if (queries.size() != im.machines()) throw UsageError("one query list per machine required");
  if (!im.built) im.build();
  std::vector<std::vector<AmpcLcp>> out(im.machines());
  im.cluster.run_round([&](Ctx& ctx) {
    const auto& qs = queries[ctx.id()];
    if (qs.size() > 3) throw std::logic_error("more than 3 LCP queries on one machine");
    for (const LcpQuery& q : qs) out[ctx.id()].push_back(im.lcp_in_round(ctx, q));
  });
  return out;
}

PalindromeRun AmpcPipeline::run() {
  Impl& im = *impl_;
  if (im.built) throw std::logic_error("run() needs a fresh pipeline");
  im.build();
  im.cluster.run_round([&](Ctx& ctx) { im.round_queries(ctx); });
  for (std::size_t level = 1; level <= im.reduce; ++level) {
    im.cluster.run_round([&](Ctx& ctx) { im.round_reduce(ctx, level); });
  }
  im.cluster.run_local([&](Ctx& ctx) {
    if (ctx.id() != 0) return;
    const std::vector<Word>* w = ctx.read(ampc_key::make(ampc_key::kBest, im.reduce, 0));
    if (w == nullptr) throw std::logic_error("missing reduction root");
    ctx.state().lps = {(*w)[0], (*w)[1]};
  });

  PalindromeRun out;
  out.config = im.cluster.config();
  out.stats = im.cluster.stats();
  out.lps = im.cluster.state(0).lps;
  out.slices.resize(im.machines());
  for (std::size_t m = 0; m < im.machines(); ++m) {
    const Machine& st = im.cluster.state(static_cast<MachineId>(m));
    st.work.count_into(out.counters);
    out.counters.max_reads_per_query = std::max(out.counters.max_reads_per_query, st.max_reads_per_query);
    out.slices[m] = {st.work.job().center_begin, st.work.owned()};
  }
  return out;
}

PalindromeRun solve_ampc(const Text& text, const SolveOptions& options) {
  AmpcPipeline pipeline(text, options);
  return pipeline.run();
}

}  // namespace palmpc
