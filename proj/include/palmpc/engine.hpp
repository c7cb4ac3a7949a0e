#pragma once

// Round-based MPC / AMPC simulator. Machines only see their own state and
// inbox; messages sent in round r are delivered at the round barrier and read
// in round r+1. Every machine's footprint (local state + inbox + outbox) is
// checked against the memory cap at each barrier.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "palmpc/errors.hpp"
#include "palmpc/strings.hpp"

namespace palmpc::engine {

using Word = std::uint64_t;
using MachineId = std::uint32_t;

enum class Model { Mpc, Ampc };

std::string_view model_name(Model m) noexcept;

/// Smallest integer >= n^exponent, robust to floating-point noise at exact powers.
std::size_t ceil_power(std::size_t n, double exponent);

struct ClusterConfig {
  std::size_t n = 0;
  double epsilon = 0.5;
  Model model = Model::Mpc;
  std::size_t memory_constant = 64;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  // Derived by make().
  std::size_t block_len = 1;         // ceil(n^(1 - epsilon))
  std::size_t machine_count = 1;     // ceil(n / block_len)
  std::size_t memory_cap_words = 0;  // memory_constant * block_len
  std::size_t io_budget_words = 0;   // AMPC shared reads per machine per round

  /// Validates epsilon for the model: MPC needs (0, 0.5], AMPC (0, 1).
  static ClusterConfig make(std::size_t n, double epsilon, Model model,
                            std::size_t memory_constant = 64, std::uint64_t seed = 0);
};

struct Envelope {
  MachineId from = 0;
  MachineId to = 0;
  std::vector<Word> payload;
};

struct RunStats {
  std::size_t rounds = 0;
  std::vector<std::size_t> peak_words;  // per machine
  std::size_t peak_machine_words = 0;
  std::size_t total_memory_words = 0;  // largest sum of footprints at any barrier
  std::uint64_t total_work = 0;
  std::uint64_t message_words = 0;
  std::uint64_t shared_reads = 0;
  std::uint64_t shared_write_words = 0;
};

/// AMPC read-only store: writes made in round r become visible in round r+1.
class SharedStore {
 public:
  using Key = std::uint64_t;

  const std::vector<Word>* find(Key key) const {
    auto it = snapshot_.find(key);
    return it == snapshot_.end() ? nullptr : &it->second;
  }
  std::size_t entries() const noexcept { return snapshot_.size(); }
  std::size_t words() const noexcept { return words_; }
  const std::unordered_map<Key, std::vector<Word>>& snapshot() const noexcept { return snapshot_; }

  void publish(std::vector<std::pair<Key, std::vector<Word>>>&& writes) {
    for (auto& [key, value] : writes) {
      auto [it, inserted] = snapshot_.try_emplace(key);
      if (!inserted) words_ -= it->second.size();
      words_ += value.size();
      it->second = std::move(value);
    }
  }

 private:
  std::unordered_map<Key, std::vector<Word>> snapshot_;
  std::size_t words_ = 0;
};

template <class State>
class Cluster;

template <class State>
class MachineContext {
 public:
  MachineId id() const noexcept { return id_; }
  std::size_t round() const noexcept { return round_; }
  const ClusterConfig& config() const noexcept { return *config_; }
  State& state() noexcept { return *state_; }
  std::span<const Envelope> inbox() const noexcept { return inbox_; }

  void send(MachineId to, std::vector<Word> payload) {
    if (!may_send_) throw std::logic_error("local step cannot send messages");
    if (to >= config_->machine_count) {
      throw UsageError("machine " + std::to_string(id_) + " sent to nonexistent machine " +
                       std::to_string(to));
    }
    outbox_words_ += payload.size();
    outbox_.push_back(Envelope{id_, to, std::move(payload)});
  }

  OpTally& tally() noexcept { return tally_; }
  void tally(std::uint64_t ops) noexcept { tally_.add(ops); }

  /// Adaptive read of the previous round's shared snapshot (AMPC only).
  const std::vector<Word>* read(SharedStore::Key key) {
    if (config_->model != Model::Ampc) throw std::logic_error("shared store is AMPC-only");
    ++reads_;
    tally_.add(1);
    return shared_->find(key);
  }
  void write(SharedStore::Key key, std::vector<Word> value) {
    if (config_->model != Model::Ampc) throw std::logic_error("shared store is AMPC-only");
    write_words_ += value.size();
    writes_.emplace_back(key, std::move(value));
  }

 private:
  friend class Cluster<State>;

  MachineId id_ = 0;
  std::size_t round_ = 0;
  const ClusterConfig* config_ = nullptr;
  State* state_ = nullptr;
  std::span<const Envelope> inbox_;
  const SharedStore* shared_ = nullptr;
  bool may_send_ = true;

  std::vector<Envelope> outbox_;
  std::size_t outbox_words_ = 0;
  std::vector<std::pair<SharedStore::Key, std::vector<Word>>> writes_;
  std::size_t write_words_ = 0;
  std::size_t reads_ = 0;
  OpTally tally_;
};

/// State must provide `std::size_t words() const`.
template <class State>
class Cluster {
 public:
  Cluster(ClusterConfig config, std::vector<State> states)
      : config_(std::move(config)), states_(std::move(states)), inboxes_(states_.size()) {
    if (states_.size() != config_.machine_count) throw UsageError("one state per machine required");
    stats_.peak_words.assign(states_.size(), 0);
  }

  const ClusterConfig& config() const noexcept { return config_; }
  const RunStats& stats() const noexcept { return stats_; }
  std::size_t machine_count() const noexcept { return states_.size(); }
  const SharedStore& shared() const noexcept { return shared_; }

  /// Direct inspection, outside the metered run.
  const State& state(MachineId m) const { return states_.at(m); }
  State& state(MachineId m) { return states_.at(m); }
  std::span<const Envelope> inbox(MachineId m) const { return inboxes_.at(m); }

  /// One communication round: every machine runs `step(ctx)` on its own
  /// state and inbox, then outboxes are exchanged at the barrier.
  template <class Step>
  void run_round(Step&& step) {
    execute(step, /*may_send=*/true);
  }

  /// Local computation with no communication; does not count as a round.
  template <class Step>
  void run_local(Step&& step) {
    execute(step, /*may_send=*/false);
  }

 private:
  ClusterConfig config_;
  std::vector<State> states_;
  std::vector<std::vector<Envelope>> inboxes_;
  SharedStore shared_;
  RunStats stats_;

  static std::size_t words_of(const std::vector<Envelope>& box) {
    std::size_t w = 0;
    for (const Envelope& e : box) w += e.payload.size();
    return w;
  }

  void note_footprint(MachineId m, std::size_t words, const char* where) {
    if (words > config_.memory_cap_words) {
      throw MemoryCapExceeded(m, stats_.rounds + 1, words, config_.memory_cap_words, where);
    }
    stats_.peak_words[m] = std::max(stats_.peak_words[m], words);
    stats_.peak_machine_words = std::max(stats_.peak_machine_words, words);
  }

  template <class Step>
  void execute(Step& step, bool may_send) {
    const std::size_t count = states_.size();
    std::vector<MachineContext<State>> contexts(count);
    std::vector<std::exception_ptr> errors(count);
    for (std::size_t m = 0; m < count; ++m) {
      auto& ctx = contexts[m];
      ctx.id_ = static_cast<MachineId>(m);
      ctx.round_ = stats_.rounds + 1;
      ctx.config_ = &config_;
      ctx.state_ = &states_[m];
      ctx.inbox_ = inboxes_[m];
      ctx.shared_ = &shared_;
      ctx.may_send_ = may_send;
    }
    auto run_range = [&](std::size_t begin, std::size_t end) {
      for (std::size_t m = begin; m < end; ++m) {
        try {
          step(contexts[m]);
        } catch (...) {
          errors[m] = std::current_exception();
        }
      }
    };
    const std::size_t threads = std::clamp<std::size_t>(config_.threads, 1, count);
    if (threads == 1) {
      run_range(0, count);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (count + threads - 1) / threads;
      for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(count, b + chunk);
        if (b < e) pool.emplace_back(run_range, b, e);
      }
      for (auto& th : pool) th.join();
    }
    // Lowest machine id wins so failures are reproducible under threading.
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    // Footprints at the end of the step, before the exchange.
    std::size_t total = 0;
    for (std::size_t m = 0; m < count; ++m) {
      const auto& ctx = contexts[m];
      const std::size_t words =
          states_[m].words() + words_of(inboxes_[m]) + ctx.outbox_words_ + ctx.write_words_;
      note_footprint(static_cast<MachineId>(m), words, "end of step");
      if (config_.model == Model::Ampc && ctx.reads_ > config_.io_budget_words) {
        throw MemoryCapExceeded(m, stats_.rounds + 1, ctx.reads_, config_.io_budget_words,
                                "shared-store reads");
      }
      total += words;
      stats_.total_work += ctx.tally_.ops + ctx.outbox_words_ + ctx.write_words_;
      stats_.message_words += ctx.outbox_words_;
      stats_.shared_reads += ctx.reads_;
      stats_.shared_write_words += ctx.write_words_;
    }
    stats_.total_memory_words = std::max(stats_.total_memory_words, total + shared_.words());

    // Barrier.
    std::vector<std::vector<Envelope>> next(count);
    std::vector<std::pair<SharedStore::Key, std::vector<Word>>> writes;
    for (std::size_t m = 0; m < count; ++m) {
      for (Envelope& e : contexts[m].outbox_) next[e.to].push_back(std::move(e));
      for (auto& w : contexts[m].writes_) writes.push_back(std::move(w));
    }
    check_unique_keys(writes);
    shared_.publish(std::move(writes));
    inboxes_ = std::move(next);

    if (may_send) {
      ++stats_.rounds;
      total = 0;
      for (std::size_t m = 0; m < count; ++m) {
        const std::size_t words = states_[m].words() + words_of(inboxes_[m]);
        note_footprint(static_cast<MachineId>(m), words, "after exchange");
        total += words;
      }
      stats_.total_memory_words = std::max(stats_.total_memory_words, total + shared_.words());
    }
  }

  static void check_unique_keys(const std::vector<std::pair<SharedStore::Key, std::vector<Word>>>& writes) {
    std::vector<SharedStore::Key> keys;
    keys.reserve(writes.size());
    for (const auto& w : writes) keys.push_back(w.first);
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
      throw std::logic_error("two writes to one shared-store key in the same round");
    }
  }
};

/// Splits `items` into `parts` near-equal contiguous fragments.
struct FragmentLayout {
  std::size_t items = 0;
  std::size_t parts = 1;

  std::size_t fragment_size() const noexcept { return parts == 0 ? 0 : (items + parts - 1) / parts; }
  std::size_t begin(std::size_t c) const noexcept { return std::min(items, c * fragment_size()); }
  std::size_t end(std::size_t c) const noexcept { return std::min(items, (c + 1) * fragment_size()); }
  std::size_t fragment_of(std::size_t item) const noexcept {
    return fragment_size() == 0 ? 0 : item / fragment_size();
  }
};

/// A requester wants words [begin, end) of `holder`'s data.
struct SliceRequest {
  MachineId requester = 0;
  MachineId holder = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct ReplicationReport {
  std::size_t rounds = 0;
  std::size_t fragments = 0;
};

/// Data replication for hot holders: each holder splits its data into as many
/// fragments as it has requests and ships them to distinct helper machines
/// (slots assigned round-robin over the whole cluster); helpers forward to
/// every requester the part of its slice they hold. Two rounds, or a single
/// direct round when no holder has more than one request, or none at all.
///
/// `data(const State&) -> std::span<const Word>` exposes a holder's words.
/// `deliver(State&, request_index, offset, std::span<const Word>)` receives a
/// piece of a request's slice at `offset` within that slice.
/// Inboxes must be drained before calling.
template <class State, class DataFn, class DeliverFn>
ReplicationReport replicate_and_serve(Cluster<State>& cluster, std::span<const SliceRequest> requests,
                                      DataFn data, DeliverFn deliver) {
  ReplicationReport report;
  if (requests.empty()) return report;
  const std::size_t machines = cluster.machine_count();
  const std::size_t cap = cluster.config().memory_cap_words;

  std::vector<std::vector<std::size_t>> by_holder(machines);
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const SliceRequest& q = requests[r];
    if (q.holder >= machines || q.requester >= machines || q.end < q.begin) {
      throw UsageError("malformed slice request");
    }
    if (q.end - q.begin > cap) throw UsageError("requested slice exceeds the requester's memory cap");
    by_holder[q.holder].push_back(r);
  }
  std::size_t max_fanout = 0;
  for (const auto& v : by_holder) max_fanout = std::max(max_fanout, v.size());

  enum : Word { kChunk = 1, kPiece = 2 };

  auto send_piece = [&](MachineContext<State>& ctx, std::size_t r, std::size_t offset,
                        std::span<const Word> words) {
    std::vector<Word> payload{kPiece, r, offset};
    payload.insert(payload.end(), words.begin(), words.end());
    ctx.send(requests[r].requester, std::move(payload));
  };

  if (max_fanout <= 1) {
    cluster.run_round([&](MachineContext<State>& ctx) {
      for (std::size_t r : by_holder[ctx.id()]) {
        const std::span<const Word> d = data(ctx.state());
        const SliceRequest& q = requests[r];
        if (q.end > d.size()) throw UsageError("slice beyond holder data");
        send_piece(ctx, r, 0, d.subspan(q.begin, q.end - q.begin));
        ctx.tally(q.end - q.begin);
      }
    });
    report.rounds = 1;
    report.fragments = requests.size();
  } else {
    std::vector<std::size_t> slot_base(machines, 0);
    std::size_t slots = 0;
    for (std::size_t h = 0; h < machines; ++h) {
      slot_base[h] = slots;
      slots += by_holder[h].size();
    }
    report.fragments = slots;

    // Holders evenly decompose their data over distinct helpers. The request
    // plan is known to every machine, so a chunk only carries its coordinates.
    cluster.run_round([&](MachineContext<State>& ctx) {
      const auto& mine = by_holder[ctx.id()];
      if (mine.empty()) return;
      const std::span<const Word> d = data(ctx.state());
      for (std::size_t r : mine) {
        if (requests[r].end > d.size()) throw UsageError("slice beyond holder data");
      }
      const FragmentLayout layout{d.size(), mine.size()};
      for (std::size_t c = 0; c < mine.size(); ++c) {
        const std::size_t cb = layout.begin(c), ce = layout.end(c);
        if (cb == ce) continue;
        std::vector<Word> payload{kChunk, ctx.id(), cb, ce - cb};
        payload.insert(payload.end(), d.begin() + static_cast<std::ptrdiff_t>(cb),
                       d.begin() + static_cast<std::ptrdiff_t>(ce));
        ctx.tally(ce - cb);
        ctx.send(static_cast<MachineId>((slot_base[ctx.id()] + c) % machines), std::move(payload));
      }
    });
    // Helpers replicate their fragment once per interested requester.
    cluster.run_round([&](MachineContext<State>& ctx) {
      for (const Envelope& e : ctx.inbox()) {
        const auto& p = e.payload;
        if (p.empty() || p[0] != kChunk) continue;
        const std::size_t holder = p[1], cb = p[2], len = p[3];
        const std::span<const Word> chunk(p.data() + 4, len);
        for (std::size_t r : by_holder[holder]) {
          const SliceRequest& q = requests[r];
          const std::size_t lo = std::max(q.begin, cb), hi = std::min(q.end, cb + len);
          ctx.tally(1);
          if (lo >= hi) continue;
          send_piece(ctx, r, lo - q.begin, chunk.subspan(lo - cb, hi - lo));
          ctx.tally(hi - lo);
        }
      }
    });
    report.rounds = 2;
  }

  cluster.run_local([&](MachineContext<State>& ctx) {
    for (const Envelope& e : ctx.inbox()) {
      const auto& p = e.payload;
      if (p.empty() || p[0] != kPiece) continue;
      deliver(ctx.state(), static_cast<std::size_t>(p[1]), static_cast<std::size_t>(p[2]),
              std::span<const Word>(p.data() + 3, p.size() - 3));
    }
  });
  return report;
}

}  // namespace palmpc::engine
