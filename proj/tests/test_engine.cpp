#include <doctest.h>

#include <atomic>
#include <vector>

#include "palmpc/engine.hpp"
#include "palmpc/errors.hpp"
#include "support.hpp"

using namespace palmpc;
using namespace palmpc::engine;
using palmpc::testing::Rng;

namespace {

struct Node {
  std::vector<Word> data;
  std::vector<Word> received;
  std::size_t words() const { return data.size() + received.size(); }
  friend bool operator==(const Node&, const Node&) = default;
};

Cluster<Node> make_cluster(std::size_t n, double eps, std::size_t c = 64, std::size_t threads = 1,
                           Model model = Model::Mpc) {
  ClusterConfig cfg = ClusterConfig::make(n, eps, model, c);
  cfg.threads = threads;
  return Cluster<Node>(cfg, std::vector<Node>(cfg.machine_count));
}

/// A few rounds of pseudo-random traffic driven by each machine's own data.
Cluster<Node> chatter(std::size_t threads) {
  auto cluster = make_cluster(4096, 0.5, 64, threads);
  for (MachineId m = 0; m < cluster.machine_count(); ++m) cluster.state(m).data = {m * 7 + 1};
  for (int r = 0; r < 5; ++r) {
    cluster.run_round([](MachineContext<Node>& ctx) {
      Node& st = ctx.state();
      Word acc = st.data.back();
      for (const Envelope& e : ctx.inbox()) {
        for (Word w : e.payload) acc = acc * 31 + w + e.from;
      }
      st.data.back() = acc;
      const auto machines = ctx.config().machine_count;
      for (int k = 0; k < 3; ++k) ctx.send(static_cast<MachineId>((acc >> (8 * k)) % machines), {acc, Word(k)});
      ctx.tally(acc % 17);
    });
  }
  return cluster;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("cluster configuration") {
  const auto big = ClusterConfig::make(65536, 0.5, Model::Mpc);
  CHECK(big.machine_count == 256);
  CHECK(big.block_len == 256);
  CHECK(big.memory_cap_words == 64 * 256);
  CHECK(ClusterConfig::make(16, 0.5, Model::Mpc).machine_count == 4);
  CHECK_THROWS_AS(ClusterConfig::make(65536, 0.75, Model::Mpc), UsageError);
  CHECK_NOTHROW(ClusterConfig::make(65536, 0.75, Model::Ampc));
  CHECK_THROWS_AS(ClusterConfig::make(16, 1.0, Model::Ampc), UsageError);
  CHECK_THROWS_AS(ClusterConfig::make(16, 0.0, Model::Mpc), UsageError);
  CHECK_THROWS_AS(ClusterConfig::make(0, 0.5, Model::Mpc), UsageError);

  const auto odd = ClusterConfig::make(1000, 0.5, Model::Mpc);
  CHECK(odd.block_len == 32);
  CHECK(odd.machine_count == 32);
  CHECK(ceil_power(1u << 20, 0.25) == 32);
  CHECK(ceil_power(1000, 1.0 / 3.0) == 10);
}

TEST_CASE("identity step only advances the round counter") {
  auto cluster = make_cluster(16, 0.5);
  cluster.state(2).data = {1, 2, 3};
  cluster.run_round([](MachineContext<Node>&) {});
  CHECK(cluster.stats().rounds == 1);
  CHECK(cluster.state(2).data == std::vector<Word>{1, 2, 3});
  CHECK(cluster.stats().message_words == 0);
  cluster.run_local([](MachineContext<Node>&) {});
  CHECK(cluster.stats().rounds == 1);
}

TEST_CASE("every machine sends one word to machine 0") {
  auto cluster = make_cluster(65536, 0.5);
  cluster.run_round([](MachineContext<Node>& ctx) { ctx.send(0, {ctx.id()}); });
  std::size_t words = 0;
  for (const Envelope& e : cluster.inbox(0)) {
    REQUIRE(e.payload.size() == 1);
    CHECK(e.payload[0] == e.from);
    words += e.payload.size();
  }
  CHECK(words == cluster.machine_count());
  CHECK(cluster.stats().message_words == cluster.machine_count());
  CHECK(cluster.stats().peak_words[0] == cluster.machine_count());
}

TEST_CASE("a machine emitting cap + 1 words aborts the run") {
  auto cluster = make_cluster(16, 0.5, 2);
  const std::size_t cap = cluster.config().memory_cap_words;
  try {
    cluster.run_round([cap](MachineContext<Node>& ctx) {
      if (ctx.id() == 3) ctx.send(1, std::vector<Word>(cap + 1, 0));
    });
    FAIL("expected a memory cap violation");
  } catch (const MemoryCapExceeded& e) {
    CHECK(e.machine() == 3);
    CHECK(e.round() == 1);
    CHECK(e.words() == cap + 1);
  }
}

TEST_CASE("receiving more than the cap aborts after the exchange") {
  auto cluster = make_cluster(16, 0.5, 2);
  const std::size_t cap = cluster.config().memory_cap_words;
  CHECK_THROWS_AS(cluster.run_round([cap](MachineContext<Node>& ctx) {
    ctx.send(0, std::vector<Word>(cap / 2 + 1, 0));
  }),
                  MemoryCapExceeded);
}

TEST_CASE("messages to nonexistent machines are rejected") {
  auto cluster = make_cluster(16, 0.5);
  CHECK_THROWS_AS(cluster.run_round([](MachineContext<Node>& ctx) { ctx.send(99, {1}); }), UsageError);
  auto other = make_cluster(16, 0.5);
  CHECK_THROWS_AS(other.run_local([](MachineContext<Node>& ctx) { ctx.send(0, {1}); }), std::logic_error);
}

TEST_CASE("results do not depend on the thread count") {
  const auto a = chatter(1);
  const auto b = chatter(4);
  const auto c = chatter(13);
  for (MachineId m = 0; m < a.machine_count(); ++m) {
    REQUIRE(a.state(m) == b.state(m));
    REQUIRE(a.state(m) == c.state(m));
  }
  CHECK(a.stats().total_work == b.stats().total_work);
  CHECK(a.stats().peak_words == c.stats().peak_words);
  CHECK(a.stats().message_words == b.stats().message_words);
  CHECK(a.stats().rounds == 5);
}

TEST_CASE("isolation canary") {
  auto cluster = make_cluster(4096, 0.5, 64, 8);
  std::atomic<int> intrusions{0};
  for (int r = 0; r < 3; ++r) {
    cluster.run_round([&](MachineContext<Node>& ctx) {
      Node& st = ctx.state();
      for (Word w : st.data) {
        if (w != ctx.id()) ++intrusions;
      }
      st.data.push_back(ctx.id());
    });
  }
  CHECK(intrusions == 0);
  for (MachineId m = 0; m < cluster.machine_count(); ++m) {
    CHECK(cluster.state(m).data == std::vector<Word>(3, m));
  }
}

TEST_CASE("shared store snapshot discipline") {
  auto cluster = make_cluster(256, 0.75, 64, 1, Model::Ampc);
  bool seen_same_round = false, seen_next_round = true;
  cluster.run_round([&](MachineContext<Node>& ctx) {
    if (ctx.id() == 0) {
      ctx.write(42, {7, 8});
      if (ctx.read(42) != nullptr) seen_same_round = true;
    }
  });
  cluster.run_round([&](MachineContext<Node>& ctx) {
    const auto* v = ctx.read(42);
    if (v == nullptr || *v != std::vector<Word>{7, 8}) seen_next_round = false;
  });
  CHECK_FALSE(seen_same_round);
  CHECK(seen_next_round);
  CHECK(cluster.stats().shared_reads == 1 + cluster.machine_count());

  auto mpc = make_cluster(16, 0.5);
  CHECK_THROWS_AS(mpc.run_round([](MachineContext<Node>& ctx) { ctx.read(1); }), std::logic_error);
  CHECK_THROWS_AS(cluster.run_round([](MachineContext<Node>& ctx) { ctx.write(5, {ctx.id()}); }),
                  std::logic_error);
}

TEST_CASE("shared reads are capped by the I/O budget") {
  auto cluster = make_cluster(256, 0.75, 1, 1, Model::Ampc);
  const std::size_t budget = cluster.config().io_budget_words;
  CHECK_THROWS_AS(cluster.run_round([budget](MachineContext<Node>& ctx) {
    for (std::size_t k = 0; k <= budget; ++k) ctx.read(k);
  }),
                  MemoryCapExceeded);
}

TEST_CASE("replication serves a hot holder within the cap") {
  // Five machines all want the whole of machine 0's data.
  auto cluster = make_cluster(25, 0.5);
  REQUIRE(cluster.machine_count() == 5);
  const std::size_t cap = cluster.config().memory_cap_words;
  std::vector<Word> payload(100);
  for (std::size_t k = 0; k < payload.size(); ++k) payload[k] = 1000 + k;
  cluster.state(0).data = payload;

  // Sending the data directly to everybody overflows machine 0.
  {
    auto direct = make_cluster(25, 0.5);
    direct.state(0).data = payload;
    CHECK_THROWS_AS(direct.run_round([&](MachineContext<Node>& ctx) {
      if (ctx.id() != 0) return;
      for (MachineId r = 0; r < 5; ++r) ctx.send(r, payload);
    }),
                    MemoryCapExceeded);
  }

  std::vector<SliceRequest> requests;
  for (MachineId r = 0; r < 5; ++r) requests.push_back({r, 0, 0, payload.size()});
  std::size_t delivered = 0;
  const auto report = replicate_and_serve(
      cluster, std::span<const SliceRequest>(requests),
      [](const Node& n) { return std::span<const Word>(n.data); },
      [&](Node& n, std::size_t r, std::size_t offset, std::span<const Word> words) {
        CHECK(r < requests.size());
        if (n.received.size() < offset + words.size()) n.received.resize(offset + words.size());
        std::copy(words.begin(), words.end(), n.received.begin() + static_cast<std::ptrdiff_t>(offset));
        delivered += words.size();
      });
  CHECK(report.rounds == 2);
  CHECK(report.fragments == 5);
  CHECK(cluster.stats().rounds == 2);
  CHECK(delivered == 5 * payload.size());
  for (MachineId r = 0; r < 5; ++r) CHECK(cluster.state(r).received == payload);
  CHECK(cluster.stats().peak_machine_words <= cap);
}

TEST_CASE("replication degenerates to one direct round") {
  auto cluster = make_cluster(25, 0.5);
  cluster.state(2).data = {5, 6, 7, 8};
  const std::vector<SliceRequest> one{{4, 2, 1, 3}};
  const auto report = replicate_and_serve(
      cluster, std::span<const SliceRequest>(one),
      [](const Node& n) { return std::span<const Word>(n.data); },
      [](Node& n, std::size_t, std::size_t offset, std::span<const Word> words) {
        CHECK(offset == 0);
        n.received.assign(words.begin(), words.end());
      });
  CHECK(report.rounds == 1);
  CHECK(cluster.state(4).received == std::vector<Word>{6, 7});

  const auto none = replicate_and_serve(
      cluster, std::span<const SliceRequest>{}, [](const Node& n) { return std::span<const Word>(n.data); },
      [](Node&, std::size_t, std::size_t, std::span<const Word>) {});
  CHECK(none.rounds == 0);
  CHECK(cluster.stats().rounds == 1);
}

TEST_CASE("replication conserves words for random request sets") {
  Rng rng(61);
  for (int t = 0; t < 40; ++t) {
    auto cluster = make_cluster(1024, 0.5);
    const std::size_t machines = cluster.machine_count();
    for (MachineId m = 0; m < machines; ++m) {
      auto& d = cluster.state(m).data;
      d.resize(rng.between(0, 40));
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = m * 1000 + k;
    }
    std::vector<SliceRequest> requests;
    std::size_t requested = 0;
    const std::size_t count = rng.between(0, 2 * machines);
    for (std::size_t r = 0; r < count; ++r) {
      const MachineId h = static_cast<MachineId>(rng.below(machines / 4 + 1));
      const std::size_t size = cluster.state(h).data.size();
      std::size_t a = rng.between(0, size), b = rng.between(0, size);
      if (a > b) std::swap(a, b);
      requests.push_back({static_cast<MachineId>(rng.below(machines)), h, a, b});
      requested += b - a;
    }
    std::vector<std::vector<Word>> got(requests.size());
    for (std::size_t r = 0; r < requests.size(); ++r) got[r].assign(requests[r].end - requests[r].begin, 0);
    std::size_t delivered = 0;
    replicate_and_serve(
        cluster, std::span<const SliceRequest>(requests),
        [](const Node& n) { return std::span<const Word>(n.data); },
        [&](Node&, std::size_t r, std::size_t offset, std::span<const Word> words) {
          std::copy(words.begin(), words.end(), got[r].begin() + static_cast<std::ptrdiff_t>(offset));
          delivered += words.size();
        });
    REQUIRE(delivered == requested);
    for (std::size_t r = 0; r < requests.size(); ++r) {
      const auto& q = requests[r];
      const auto& d = cluster.state(q.holder).data;
      REQUIRE(got[r] == std::vector<Word>(d.begin() + static_cast<std::ptrdiff_t>(q.begin),
                                          d.begin() + static_cast<std::ptrdiff_t>(q.end)));
    }
  }
}

TEST_CASE("replication rejects infeasible plans") {
  auto cluster = make_cluster(16, 0.5, 1);
  cluster.state(0).data.assign(3, 1);
  const std::vector<SliceRequest> too_big{{1, 0, 0, cluster.config().memory_cap_words + 1}};
  CHECK_THROWS_AS(replicate_and_serve(
                      cluster, std::span<const SliceRequest>(too_big),
                      [](const Node& n) { return std::span<const Word>(n.data); },
                      [](Node&, std::size_t, std::size_t, std::span<const Word>) {}),
                  UsageError);
}

TEST_CASE("round count of a fixed phase sequence does not depend on n") {
  for (std::size_t n : {1u << 10, 1u << 12, 1u << 14, 1u << 16}) {
    auto cluster = make_cluster(n, 0.5);
    cluster.state(0).data.assign(cluster.config().block_len, 3);
    std::vector<SliceRequest> requests;
    for (MachineId r = 0; r < cluster.machine_count(); ++r) requests.push_back({r, 0, 0, cluster.config().block_len});
    replicate_and_serve(
        cluster, std::span<const SliceRequest>(requests),
        [](const Node& nd) { return std::span<const Word>(nd.data); },
        [](Node& nd, std::size_t, std::size_t, std::span<const Word> w) {
          nd.received.insert(nd.received.end(), w.begin(), w.end());
        });
    cluster.run_round([](MachineContext<Node>& ctx) { ctx.send(0, {ctx.state().received.size()}); });
    CHECK(cluster.stats().rounds == 3);
  }
}

}  // TEST_SUITE
