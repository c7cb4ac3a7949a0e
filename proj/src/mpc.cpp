#include "palmpc/mpc.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "detail/center_work.hpp"
#include "detail/records.hpp"
#include "palmpc/errors.hpp"
#include "palmpc/simd.hpp"

namespace palmpc {

using detail::Outbox;
using detail::Rec;
using engine::MachineId;
using engine::Word;

namespace {

struct HeldLetters {
  std::size_t begin = 0;  // position in S
  std::vector<Symbol> letters;
};

struct HeldFragment {
  bool present = false;
  std::vector<Word> values;
};

struct Pending {
  LcpQuery query;
  std::size_t windows = 0;  // full windows compared by fingerprint
  std::optional<std::size_t> answer;
  std::size_t lo = 0;  // letters [lo, hi) of both suffixes are fetched
  std::size_t hi = 0;
  std::size_t audit_end = 0;  // [lo, audit_end) must match if the fingerprints did
  bool chain_differs = false;
};

struct Machine {
  std::vector<Symbol> block;
  detail::CenterWork work;
  std::vector<HeldLetters> letter_chunks;   // replicas, sorted by begin
  std::vector<Word> store;                  // windows of this residue class
  bool scattered = false;
  std::vector<HeldFragment> fragments;      // by residue class
  std::vector<Pending> pending;
  std::vector<std::size_t> answers;
  std::size_t letter_fetches = 0;
  LpsResult lps;

  std::size_t words() const {
    std::size_t w = 4 + block.size() + work.words() + store.size() + answers.size();
    for (const auto& c : letter_chunks) w += 1 + c.letters.size();
    for (const auto& f : fragments) w += f.present ? 1 + f.values.size() : 0;
    w += 8 * pending.size();
    return w;
  }
};

using Ctx = engine::MachineContext<Machine>;

}  // namespace

struct MpcPipeline::Impl {
  std::size_t n;
  BlockPlan plan;
  FingerprintScheme scheme;
  std::size_t w;        // window length = machine count
  std::size_t chunk;    // letter replica chunk size
  std::size_t layers;
  engine::Cluster<Machine> cluster;
  bool store_built = false;
  std::size_t waves = 0;

  Impl(const Text& text, const SolveOptions& opt, engine::ClusterConfig cfg)
      : n(text.size()),
        plan(plan_decomposition(cfg)),
        scheme(FingerprintScheme::create(text.size(), text.sigma(), opt.layers, opt.seed)),
        w(cfg.machine_count),
        chunk((cfg.block_len + cfg.machine_count - 1) / cfg.machine_count),
        layers(opt.layers),
        cluster(cfg, initial_states(text, cfg)) {}

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
  std::size_t class_size(std::size_t x) const { return (2 * n - x + w - 1) / w; }
  engine::FragmentLayout class_layout(std::size_t x) const { return {class_size(x), machines()}; }
  MachineId fragment_helper(std::size_t x, std::size_t c) const {
    return static_cast<MachineId>((x + c) % machines());
  }
  MachineId letter_helper(std::size_t pos) const {
    const std::size_t m = plan.block_of(pos);
    return static_cast<MachineId>((m + (pos - plan.block_begin(m)) / chunk) % machines());
  }
  std::size_t letter_chunk_end(std::size_t pos) const {
    const std::size_t m = plan.block_of(pos);
    const std::size_t c = (pos - plan.block_begin(m)) / chunk;
    return std::min(plan.block_end(m), plan.block_begin(m) + (c + 1) * chunk);
  }

  // ---- round 1 -----------------------------------------------------------

  void send_blocks(Ctx& ctx, Outbox& out) const {
    const Machine& st = ctx.state();
    const std::size_t m = ctx.id();
    const std::size_t bm = plan.block_begin(m), em = plan.block_end(m);
    detail::send_segment_blocks(plan, m, st.block, out);
    for (std::size_t b = bm; b < em; b = letter_chunk_end(b)) {
      const std::size_t e = letter_chunk_end(b);
      out.put(letter_helper(b), Rec::LetterChunk, {b}, std::span<const Symbol>(st.block).subspan(b - bm, e - b));
    }
  }

  // Each window S'[k, k+w) is split along block segments; every segment
  // ships its piece to the window's holder k mod w.
  void send_pieces(Ctx& ctx, Outbox& out, std::size_t sb, std::span<const Symbol> letters) const {
    const std::size_t se = sb + letters.size();
    const FragmentHasher hasher(scheme, letters, &ctx.tally());
    const std::size_t kmin = sb + 1 > w ? sb + 1 - w : 0;
    std::vector<std::uint64_t> vals(layers);
    for (std::size_t x = 0; x < w; ++x) {
      std::size_t k = kmin + (x + w - kmin % w) % w;
      if (k >= se) continue;
      std::vector<Word>& box = out.open(static_cast<MachineId>(x), Rec::Pieces);
      box.push_back(sb);
      for (; k < se; k += w) {
        const std::size_t pb = std::max(k, sb), pe = std::min(k + w, se);
        hasher.values(pb - sb, pe - sb, vals.data());
        box.push_back(k);
        box.insert(box.end(), vals.begin(), vals.end());
      }
      out.close();
    }
  }

  void round_assemble(Ctx& ctx) const {
    Outbox out(machines());
    send_blocks(ctx, out);
    const Machine& st = ctx.state();
    const std::size_t m = ctx.id();
    send_pieces(ctx, out, plan.block_begin(m), st.block);
    std::vector<Symbol> reversed(st.block.rbegin(), st.block.rend());
    send_pieces(ctx, out, 2 * n - plan.block_end(m), reversed);
    out.flush(ctx);
    ctx.state().block = {};
  }

  void absorb_assembly(Ctx& ctx) const {
    Machine& st = ctx.state();
    const std::size_t x = ctx.id();
    // x^o for o < w, one row per layer.
    std::vector<std::uint64_t> pw(layers * w);
    for (std::size_t l = 0; l < layers; ++l) {
      std::uint64_t v = 1;
      for (std::size_t o = 0; o < w; ++o) {
        pw[l * w + o] = v;
        v = scheme.mul(l, v, scheme.layer(l).base);
      }
    }
    ctx.tally(layers * w);
    st.store.assign(class_size(x) * layers, 0);
    detail::for_each_record(ctx.inbox(), [&](MachineId, Rec kind, std::span<const Word> f) {
      switch (kind) {
        case Rec::Block:
          st.work.receive(f[0], f.subspan(1));
          ctx.tally(f.size());
          break;
        case Rec::LetterChunk:
          st.letter_chunks.push_back({f[0], std::vector<Symbol>(f.begin() + 1, f.end())});
          ctx.tally(f.size());
          break;
        case Rec::Pieces: {
          const std::size_t sb = f[0];
          for (std::size_t at = 1; at < f.size(); at += 1 + layers) {
            const std::size_t k = f[at];
            const std::size_t offset = std::max(k, sb) - k;
            const std::size_t t = k / w;
            for (std::size_t l = 0; l < layers; ++l) {
              Word& slot = st.store[t * layers + l];
              slot = scheme.add(l, slot, scheme.mul(l, pw[l * w + offset], f[at + 1 + l]));
            }
            ctx.tally(layers);
          }
          break;
        }
        default:
          throw std::logic_error("unexpected record while assembling");
      }
    });
    std::sort(st.letter_chunks.begin(), st.letter_chunks.end(),
              [](const HeldLetters& a, const HeldLetters& b) { return a.begin < b.begin; });
  }

  // ---- LCP waves ---------------------------------------------------------

  void scatter_store(Ctx& ctx, Outbox& out) const {
    Machine& st = ctx.state();
    const std::size_t x = ctx.id();
    const engine::FragmentLayout layout = class_layout(x);
    for (std::size_t c = 0; c < layout.parts; ++c) {
      const std::size_t b = layout.begin(c), e = layout.end(c);
      if (b >= e) break;
      out.put(fragment_helper(x, c), Rec::StoreFragment, {x},
              std::span<const Word>(st.store).subspan(b * layers, (e - b) * layers));
    }
    st.store = {};
    st.scattered = true;
  }

  // Fragment of class `cls` held by `helper`.
  std::size_t fragment_index(std::size_t cls, std::size_t helper) const {
    return (helper + machines() - cls % machines()) % machines();
  }

  void issue(Ctx& ctx, Outbox& out, const std::vector<LcpQuery>& queries) const {
    Machine& st = ctx.state();
    if (queries.size() > 3) throw std::logic_error("more than 3 LCP queries on one machine");
    st.pending.clear();
    for (const LcpQuery& raw : queries) {
      Pending p;
      p.query = raw;
      if (raw.first > 2 * n || raw.second > 2 * n) throw UsageError("LCP query position beyond S'");
      p.query.limit = std::min(raw.limit, 2 * n - std::max(raw.first, raw.second));
      if (p.query.first == p.query.second || p.query.limit == 0) {
        p.answer = p.query.limit;
      } else {
        p.windows = p.query.limit / w;
      }
      st.pending.push_back(std::move(p));
    }
    for (std::size_t slot = 0; slot < st.pending.size(); ++slot) {
      const Pending& p = st.pending[slot];
      if (p.answer || p.windows == 0) continue;
      for (std::size_t side = 0; side < 2; ++side) {
        const std::size_t pos = side == 0 ? p.query.first : p.query.second;
        const std::size_t cls = pos % w, t0 = pos / w, t1 = t0 + p.windows;
        const engine::FragmentLayout layout = class_layout(cls);
        for (std::size_t c = layout.fragment_of(t0); c <= layout.fragment_of(t1 - 1); ++c) {
          out.put(fragment_helper(cls, c), Rec::ChainRequest, {detail::tag(slot, side), pos, p.windows});
        }
      }
    }
  }

  void serve_chains(Ctx& ctx, Outbox& out) const {
    Machine& st = ctx.state();
    if (st.fragments.empty()) st.fragments.resize(w);
    detail::for_each_record(ctx.inbox(), [&](MachineId, Rec kind, std::span<const Word> f) {
      if (kind != Rec::StoreFragment) return;
      HeldFragment& h = st.fragments.at(f[0]);
      h.present = true;
      h.values.assign(f.begin() + 1, f.end());
      ctx.tally(f.size());
    });
    detail::for_each_record(ctx.inbox(), [&](MachineId from, Rec kind, std::span<const Word> f) {
      if (kind != Rec::ChainRequest) return;
      const std::size_t pos = f[1], windows = f[2];
      const std::size_t cls = pos % w, t0 = pos / w;
      const engine::FragmentLayout layout = class_layout(cls);
      const std::size_t c = fragment_index(cls, ctx.id());
      const std::size_t b = std::max(t0, layout.begin(c)), e = std::min(t0 + windows, layout.end(c));
      const HeldFragment& h = st.fragments.at(cls);
      if (!h.present || b >= e || (e - layout.begin(c)) * layers > h.values.size()) {
        throw std::logic_error("chain request for windows this machine does not hold");
      }
      out.put(from, Rec::ChainReply, {f[0]},
              std::span<const Word>(h.values).subspan((b - layout.begin(c)) * layers, (e - b) * layers));
      ctx.tally(e - b);
    });
  }

  struct ChainPiece {
    std::size_t first;  // window index relative to the suffix start
    std::span<const Word> values;
  };

  // First window index where the two chains differ, or `windows`.
  std::size_t first_differing_window(std::array<std::vector<ChainPiece>, 2>& chains, std::size_t windows,
                                     OpTally& tally) const {
    for (auto& c : chains) {
      std::sort(c.begin(), c.end(), [](const ChainPiece& a, const ChainPiece& b) { return a.first < b.first; });
    }
    std::array<std::size_t, 2> idx{0, 0};
    std::size_t at = 0;
    while (at < windows) {
      std::array<std::size_t, 2> avail{};
      std::array<const Word*, 2> ptr{};
      for (std::size_t s = 0; s < 2; ++s) {
        auto& c = chains[s];
        while (idx[s] < c.size() && c[idx[s]].first + c[idx[s]].values.size() / layers <= at) ++idx[s];
        if (idx[s] == c.size() || c[idx[s]].first > at) throw std::logic_error("fingerprint chain has a gap");
        const ChainPiece& piece = c[idx[s]];
        avail[s] = piece.first + piece.values.size() / layers - at;
        ptr[s] = piece.values.data() + (at - piece.first) * layers;
      }
      const std::size_t len = std::min({avail[0], avail[1], windows - at});
      const std::size_t miss = simd::mismatch(ptr[0], ptr[1], len * layers);
      tally.add(len);
      if (miss < len * layers) return at + miss / layers;
      at += len;
    }
    return windows;
  }

  std::size_t s_position(std::size_t k) const { return k < n ? k : 2 * n - 1 - k; }

  // Calls f(helper) once per letter helper holding part of S'[a, b).
  template <class F>
  void for_each_letter_helper(std::size_t a, std::size_t b, F&& f) const {
    std::vector<MachineId> seen;
    auto walk = [&](std::size_t sb, std::size_t se) {
      for (std::size_t p = sb; p < se; p = letter_chunk_end(p)) seen.push_back(letter_helper(p));
    };
    if (a < n) walk(a, std::min(b, n));
    if (b > n) walk(2 * n - b, 2 * n - std::max(a, n));
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (MachineId h : seen) f(h);
  }

  void request_letters(Ctx& ctx, Outbox& out) const {
    Machine& st = ctx.state();
    std::vector<std::array<std::vector<ChainPiece>, 2>> chains(st.pending.size());
    detail::for_each_record(ctx.inbox(), [&](MachineId from, Rec kind, std::span<const Word> f) {
      if (kind != Rec::ChainReply) return;
      const std::size_t slot = detail::tag_slot(f[0]), side = detail::tag_side(f[0]);
      const Pending& p = st.pending.at(slot);
      const std::size_t pos = side == 0 ? p.query.first : p.query.second;
      const std::size_t cls = pos % w, t0 = pos / w;
      const std::size_t first = std::max(t0, class_layout(cls).begin(fragment_index(cls, from)));
      chains[slot][side].push_back({first - t0, f.subspan(1)});
    });
    for (std::size_t slot = 0; slot < st.pending.size(); ++slot) {
      Pending& p = st.pending[slot];
      if (p.answer) continue;
      const std::size_t star = p.windows == 0 ? 0 : first_differing_window(chains[slot], p.windows, ctx.tally());
      p.chain_differs = star < p.windows;
      p.lo = star > 0 ? (star - 1) * w : 0;
      p.hi = std::min(p.query.limit, (star + 1) * w);
      p.audit_end = star * w;
      for (std::size_t side = 0; side < 2; ++side) {
        const std::size_t pos = side == 0 ? p.query.first : p.query.second;
        const std::size_t a = pos + p.lo, b = pos + p.hi;
        for_each_letter_helper(a, b, [&](MachineId h) {
          out.put(h, Rec::LetterRequest, {detail::tag(slot, side), a, b});
        });
      }
    }
  }

  // Held chunks overlapping S[sb, se), in ascending order.
  static std::pair<std::size_t, std::size_t> held_range(const std::vector<HeldLetters>& chunks, std::size_t sb,
                                                        std::size_t se) {
    auto first = std::upper_bound(chunks.begin(), chunks.end(), sb,
                                  [](std::size_t v, const HeldLetters& h) { return v < h.begin; });
    if (first != chunks.begin() && (first - 1)->begin + (first - 1)->letters.size() > sb) --first;
    auto last = std::lower_bound(first, chunks.end(), se,
                                 [](const HeldLetters& h, std::size_t v) { return h.begin < v; });
    return {static_cast<std::size_t>(first - chunks.begin()), static_cast<std::size_t>(last - chunks.begin())};
  }

  // Only the chunks this helper holds inside the range are visited, so a
  // request costs its reply size plus a search.
  void serve_letters(Ctx& ctx, Outbox& out) const {
    const Machine& st = ctx.state();
    const auto& chunks = st.letter_chunks;
    detail::for_each_record(ctx.inbox(), [&](MachineId from, Rec kind, std::span<const Word> f) {
      if (kind != Rec::LetterRequest) return;
      std::vector<Word>& box = out.open(from, Rec::LetterReply);
      box.push_back(f[0]);
      const std::size_t start = box.size();
      const std::size_t a = f[1], b = f[2];
      std::size_t visited = 0;
      if (a < n) {
        const std::size_t sb = a, se = std::min<std::size_t>(b, n);
        const auto [lo, hi] = held_range(chunks, sb, se);
        for (std::size_t c = lo; c < hi; ++c, ++visited) {
          const HeldLetters& h = chunks[c];
          const std::size_t from_pos = std::max(sb, h.begin), to_pos = std::min(se, h.begin + h.letters.size());
          for (std::size_t s = from_pos; s < to_pos; ++s) box.push_back(h.letters[s - h.begin]);
        }
      }
      if (b > n) {
        // S'[max(a, n), b) reads S backwards from 2n-1-max(a, n) down to 2n-b.
        const std::size_t sb = 2 * n - b, se = 2 * n - std::max<std::size_t>(a, n);
        const auto [lo, hi] = held_range(chunks, sb, se);
        for (std::size_t c = hi; c-- > lo; ++visited) {
          const HeldLetters& h = chunks[c];
          const std::size_t from_pos = std::max(sb, h.begin), to_pos = std::min(se, h.begin + h.letters.size());
          for (std::size_t s = to_pos; s-- > from_pos;) box.push_back(h.letters[s - h.begin]);
        }
      }
      if (visited == 0 && b > a) throw std::logic_error("letter request for a chunk not held");
      ctx.tally(box.size() - start + visited + 2);
      out.close();
    });
  }

  // Letter replies from the previous round settle every pending query.
  void resolve(Ctx& ctx) const {
    Machine& st = ctx.state();
    if (st.pending.empty()) {
      st.answers.clear();
      return;
    }
    // Replies per (slot, side), keyed by sender.
    std::vector<std::vector<std::pair<MachineId, std::span<const Word>>>> replies(2 * st.pending.size());
    detail::for_each_record(ctx.inbox(), [&](MachineId from, Rec kind, std::span<const Word> f) {
      if (kind != Rec::LetterReply) return;
      replies.at(f[0]).emplace_back(from, f.subspan(1));
      st.letter_fetches += f.size() - 1;
    });
    std::vector<std::size_t> cursor(machines(), 0);
    std::vector<std::span<const Word>> by_helper(machines());
    std::array<std::vector<Symbol>, 2> letters;
    st.answers.clear();
    for (std::size_t slot = 0; slot < st.pending.size(); ++slot) {
      Pending& p = st.pending[slot];
      if (!p.answer) {
        const std::size_t len = p.hi - p.lo;
        for (std::size_t side = 0; side < 2; ++side) {
          const auto& got = replies[detail::tag(slot, side)];
          for (const auto& [from, words] : got) {
            by_helper[from] = words;
            cursor[from] = 0;
          }
          const std::size_t base = (side == 0 ? p.query.first : p.query.second) + p.lo;
          letters[side].resize(len);
          for (std::size_t k = 0; k < len; ++k) {
            const MachineId h = letter_helper(s_position(base + k));
            if (cursor[h] >= by_helper[h].size()) throw std::logic_error("letter window incomplete");
            letters[side][k] = static_cast<Symbol>(by_helper[h][cursor[h]++]);
          }
          for (const auto& [from, words] : got) by_helper[from] = {};
          ctx.tally(len);
        }
        const std::size_t miss = simd::mismatch(letters[0].data(), letters[1].data(), len);
        ctx.tally(miss + 1);
        const std::size_t at = p.lo + miss;
        if (at < p.audit_end) {
          throw CollisionDetected("fingerprints matched on unequal windows of S' at offsets " +
                                  std::to_string(p.query.first) + ", " + std::to_string(p.query.second));
        }
        if (miss == len && p.chain_differs) {
          throw std::logic_error("fingerprints differ on equal letters");
        }
        p.answer = miss == len ? p.query.limit : at;
      }
      st.answers.push_back(*p.answer);
    }
    st.pending.clear();
  }

  template <class Issue>
  void run_wave(Issue&& queries_for) {
    ++waves;
    cluster.run_round([&](Ctx& ctx) {
      Outbox out(machines());
      resolve(ctx);
      if (!ctx.state().scattered) scatter_store(ctx, out);
      issue(ctx, out, queries_for(ctx));
      out.flush(ctx);
    });
    cluster.run_round([&](Ctx& ctx) {
      Outbox out(machines());
      serve_chains(ctx, out);
      out.flush(ctx);
    });
    cluster.run_round([&](Ctx& ctx) {
      Outbox out(machines());
      request_letters(ctx, out);
      out.flush(ctx);
    });
    cluster.run_round([&](Ctx& ctx) {
      Outbox out(machines());
      serve_letters(ctx, out);
      out.flush(ctx);
    });
  }

  void build() {
    if (store_built) throw std::logic_error("modular store already built");
    cluster.run_round([&](Ctx& ctx) { round_assemble(ctx); });
    cluster.run_local([&](Ctx& ctx) { absorb_assembly(ctx); });
    store_built = true;
  }
};

MpcPipeline::MpcPipeline(const Text& text, const SolveOptions& options) {
  if (text.empty()) throw UsageError("text must be non-empty");
  engine::ClusterConfig cfg =
      engine::ClusterConfig::make(text.size(), options.epsilon, engine::Model::Mpc, options.memory_constant, options.seed);
  cfg.threads = options.threads;
  impl_ = std::make_unique<Impl>(text, options, cfg);
}

MpcPipeline::~MpcPipeline() = default;
MpcPipeline::MpcPipeline(MpcPipeline&&) noexcept = default;
MpcPipeline& MpcPipeline::operator=(MpcPipeline&&) noexcept = default;

const engine::ClusterConfig& MpcPipeline::config() const noexcept { return impl_->cluster.config(); }
const BlockPlan& MpcPipeline::plan() const noexcept { return impl_->plan; }
const FingerprintScheme& MpcPipeline::scheme() const noexcept { return impl_->scheme; }
std::size_t MpcPipeline::window() const noexcept { return impl_->w; }
const engine::RunStats& MpcPipeline::stats() const noexcept { return impl_->cluster.stats(); }

void MpcPipeline::build_modular_store() { impl_->build(); }

std::size_t MpcPipeline::store_size(MachineId x) const {
  return impl_->cluster.state(x).store.size() / impl_->layers;
}

std::vector<std::uint64_t> MpcPipeline::store_window(std::size_t k) const {
  const Impl& im = *impl_;
  if (k >= 2 * im.n) throw UsageError("window start beyond S'");
  const Machine& holder = im.cluster.state(static_cast<MachineId>(k % im.w));
  if (holder.scattered || holder.store.empty()) throw std::logic_error("modular store is not on its holders");
  const std::size_t t = k / im.w;
  return {holder.store.begin() + static_cast<std::ptrdiff_t>(t * im.layers),
          holder.store.begin() + static_cast<std::ptrdiff_t>((t + 1) * im.layers)};
}

std::vector<std::vector<std::size_t>> MpcPipeline::answer_lcp(const std::vector<std::vector<LcpQuery>>& queries) {
  Impl& im = *impl_;
  if (queries.size() != im.machines()) throw UsageError("one query list per machine required");
  if (!im.store_built) im.build();
  im.run_wave([&](Ctx& ctx) { return queries[ctx.id()]; });
  std::vector<std::vector<std::size_t>> out(im.machines());
  im.cluster.run_local([&](Ctx& ctx) {
    im.resolve(ctx);
    out[ctx.id()] = ctx.state().answers;
  });
  return out;
}

PalindromeRun MpcPipeline::run() {
  Impl& im = *impl_;
  if (im.store_built) throw std::logic_error("run() needs a fresh pipeline");
  im.build();

  // Rounds 2-5: local phase, then the first wave.
  im.run_wave([&](Ctx& ctx) {
    detail::CenterWork& work = ctx.state().work;
    work.local_phase(ctx.tally());
    return work.first_wave();
  });
  // Rounds 6-9: the Case A query, issued once a and b are known.
  im.run_wave([&](Ctx& ctx) {
    Machine& st = ctx.state();
    return st.work.second_wave(st.answers);
  });
  // Round 10.
  im.cluster.run_round([&](Ctx& ctx) {
    im.resolve(ctx);
    Machine& st = ctx.state();
    st.work.finish(st.answers, ctx.tally());
    st.answers.clear();
    if (st.work.active()) {
      const LpsResult best = st.work.best();
      Outbox out(im.machines());
      out.put(0, Rec::Best, {best.start, best.length});
      out.flush(ctx);
    }
  });
  im.cluster.run_local([&](Ctx& ctx) {
    if (ctx.id() != 0) return;
    LpsResult best;
    detail::for_each_record(ctx.inbox(), [&](MachineId, Rec kind, std::span<const Word> f) {
      if (kind != Rec::Best) return;
      const LpsResult r{f[0], f[1]};
      if (r.length > best.length || (r.length == best.length && r.start < best.start)) best = r;
    });
    ctx.state().lps = best;
  });

  PalindromeRun out;
  out.config = im.cluster.config();
  out.stats = im.cluster.stats();
  out.lps = im.cluster.state(0).lps;
  out.slices.resize(im.machines());
  for (std::size_t m = 0; m < im.machines(); ++m) {
    const Machine& st = im.cluster.state(static_cast<MachineId>(m));
    st.work.count_into(out.counters);
    out.counters.letter_fetches += st.letter_fetches;
    out.slices[m] = {st.work.job().center_begin, st.work.owned()};
  }
  return out;
}

PalindromeRun solve_mpc(const Text& text, const SolveOptions& options) {
  MpcPipeline pipeline(text, options);
  return pipeline.run();
}

}  // namespace palmpc
