#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "aqm/discipline.hpp"
#include "aqm/factory.hpp"
#include "sim/dumbbell.hpp"
#include "sim/link.hpp"
#include "sim/rng.hpp"
#include "sim/scheduler.hpp"
#include "sim/time.hpp"

using namespace aqmsim;
using sim::SimTime;

namespace {
SimTime sec(double s) { return SimTime::from_seconds(s); }
}  // namespace

TEST_CASE("SimTime converts seconds to integer nanoseconds") {
  CHECK(sec(0.018).ns() == 18'000'000);
  CHECK(sec(1.5).seconds() == doctest::Approx(1.5));
  CHECK(sec(0.001) + sec(0.002) == sec(0.003));
  CHECK(sim::serialization_time(1000, 1e6).ns() == 8'000'000);
  CHECK_THROWS_AS(sim::serialization_time(1000, 0), std::invalid_argument);
  CHECK_THROWS(SimTime::from_seconds(std::nan("")));
}

TEST_CASE("1000-byte packets on a 0.1 Mbps link accumulate no drift over 100 s") {
  // 80 ms per packet: 1250 back-to-back packets end exactly at 100 s.
  sim::Link link(1e5, SimTime{});
  SimTime last;
  for (int i = 0; i < 1250; ++i) last = link.transmit(1000, SimTime{});
  CHECK(last.ns() == 100'000'000'000LL);
}

TEST_CASE("scheduler fires events in time order") {
  sim::Scheduler s;
  std::vector<int> order;
  s.schedule(sec(5), [&] { order.push_back(5); });
  s.schedule(sec(3), [&] { order.push_back(3); });
  s.run_until(sec(10));
  CHECK(order == std::vector<int>{3, 5});
}

TEST_CASE("simultaneous events fire in insertion order") {
  sim::Scheduler s;
  std::vector<char> order;
  s.schedule(sec(7), [&] { order.push_back('A'); });
  s.schedule(sec(7), [&] { order.push_back('B'); });
  s.run_until(sec(7));
  CHECK(order == std::vector<char>{'A', 'B'});
}

TEST_CASE("an event scheduled for now runs after the current one returns") {
  sim::Scheduler s;
  std::vector<int> order;
  s.schedule(sec(1), [&] {
    s.schedule(s.now(), [&] { order.push_back(2); });
    order.push_back(1);
  });
  s.run_until(sec(2));
  CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("scheduling in the past fails loudly") {
  sim::Scheduler s;
  s.run_until(sec(5));
  CHECK_THROWS_AS(s.schedule(sec(4), [] {}), std::logic_error);
}

TEST_CASE("run_until on an empty scheduler advances the clock") {
  sim::Scheduler s;
  s.run_until(sec(10));
  CHECK(s.now() == sec(10));
  CHECK(s.events_fired() == 0);
}

TEST_CASE("run_until stops at the end time with the clock on it") {
  sim::Scheduler s;
  std::vector<double> fired;
  std::function<void()> tick = [&] {
    fired.push_back(s.now().seconds());
    s.schedule_in(sec(1), tick);
  };
  s.schedule(SimTime{}, tick);
  s.run_until(sec(3.5));
  CHECK(fired == std::vector<double>{0, 1, 2, 3});
  CHECK(s.now() == sec(3.5));
}

TEST_CASE("clock never runs backwards (random schedules)") {
  sim::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    sim::Scheduler s;
    SimTime last;
    bool monotone = true;
    int remaining = 2000;
    std::function<void()> spawn = [&] {
      if (s.now() < last) monotone = false;
      last = s.now();
      if (remaining-- <= 0) return;
      // Mix of zero, tiny and larger delays.
      const auto delay = SimTime::from_ns(static_cast<std::int64_t>(rng.below(3)) *
                                          static_cast<std::int64_t>(rng.below(1'000'000)));
      s.schedule_in(delay, spawn);
      if (rng.bernoulli(0.3)) s.schedule_in(delay + SimTime::from_ns(1), spawn);
    };
    s.schedule(SimTime{}, spawn);
    s.run_until(sec(1000));
    CHECK(monotone);
  }
}

TEST_CASE("identical schedules produce identical trace digests") {
  auto run = [](std::uint64_t seed) {
    sim::Scheduler s;
    sim::Rng rng(seed);
    int n = 0;
    std::function<void()> step = [&] {
      if (++n < 500) s.schedule_in(SimTime::from_ns(static_cast<std::int64_t>(rng.below(1000))), step);
    };
    s.schedule(SimTime{}, step);
    s.schedule(SimTime{}, step);
    s.run_until(sec(1));
    return s.trace_digest();
  };
  CHECK(run(3) == run(3));
  CHECK(run(3) != run(4));
}

TEST_CASE("link delivery is start + serialization + propagation") {
  sim::Link link(1e6, sec(0.010));
  CHECK(link.transmit(1000, SimTime{}) == sec(0.018));
  CHECK(link.busy_until() == sec(0.008));
  // Queued behind the first packet.
  CHECK(link.transmit(1000, SimTime{}) == sec(0.026));
  CHECK(link.busy_until() == sec(0.016));
  // An idle link starts at now.
  CHECK(link.transmit(1000, sec(1)) == sec(1.018));
}

TEST_CASE("links reject non-positive bandwidth and negative delay") {
  CHECK_THROWS_AS(sim::Link(0, SimTime{}), std::invalid_argument);
  CHECK_THROWS_AS(sim::Link(-1, SimTime{}), std::invalid_argument);
  CHECK_THROWS_AS(sim::Link(1e6, sec(-0.001)), std::invalid_argument);
}

TEST_CASE("rng streams are reproducible and derived streams differ") {
  sim::Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  CHECK(sim::Rng(42).next_u64() != c.next_u64());
  CHECK(sim::Rng(42).derive(1).next_u64() == sim::Rng(42).derive(1).next_u64());
  CHECK(sim::Rng(42).derive(1).next_u64() != sim::Rng(42).derive(2).next_u64());
}

TEST_CASE("rng uniform and below stay in range and look uniform") {
  sim::Rng rng(1);
  std::vector<int> hist(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const auto k = rng.below(10);
    REQUIRE(k < 10);
    ++hist[k];
  }
  // Binomial(n, 0.1): sigma = sqrt(n * 0.1 * 0.9).
  const double sigma = std::sqrt(n * 0.1 * 0.9);
  for (int h : hist) CHECK(std::abs(h - n * 0.1) < 5 * sigma);
}

TEST_CASE("bernoulli at the edges does not consume the stream") {
  sim::Rng rng(9);
  const auto before = rng.draws();
  CHECK_FALSE(rng.bernoulli(0));
  CHECK(rng.bernoulli(1));
  CHECK(rng.draws() == before);
}

namespace {

struct Harness {
  sim::Scheduler sched;
  std::unique_ptr<sim::Dumbbell> net;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;

  explicit Harness(std::unique_ptr<aqm::QueueDiscipline> disc) {
    sim::Dumbbell::Observer obs;
    obs.on_drop = [this](const sim::Packet&, SimTime) { ++dropped; };
    obs.on_deliver = [this](const sim::Packet&, SimTime) { ++delivered; };
    net = std::make_unique<sim::Dumbbell>(sched, sim::DumbbellConfig{}, std::move(disc), obs);
  }
};

sim::Packet data(sim::FlowId flow, std::uint64_t seq) {
  sim::Packet p;
  p.flow = flow;
  p.seq = seq;
  p.size_bytes = 1000;
  return p;
}

}  // namespace

TEST_CASE("a lone packet crosses the dumbbell in the sum of hop delays") {
  Harness h(std::make_unique<aqm::DropTailQueue>(aqm::Capacity::packets(10)));
  SimTime arrival = SimTime::never();
  h.net->add_flow(0, [&](const sim::Packet&) { arrival = h.sched.now(); }, [](const sim::Packet&) {});
  h.sched.schedule(SimTime{}, [&] { h.net->send_data(data(0, 0)); });
  h.sched.run_until(sec(1));
  // access 10 Mbps/1 ms twice, bottleneck 1 Mbps/10 ms: 0.8+1 + 8+10 + 0.8+1 ms.
  CHECK(arrival == sec(0.0216));
}

TEST_CASE("dumbbell conserves packets at every instant (fuzzed load)") {
  for (auto kind : aqm::all_disciplines()) {
    CAPTURE(aqm::to_string(kind));
    aqm::DisciplineSpec spec;
    spec.kind = kind;
    spec.red.min_th = 5;
    spec.red.max_th = 15;
    Harness h(aqm::make_discipline(spec, aqm::Capacity::packets(20), sim::Rng(5), 1000));
    for (sim::FlowId f = 0; f < 4; ++f) h.net->add_flow(f, [](const sim::Packet&) {}, [](const sim::Packet&) {});

    sim::Rng rng(11);
    bool balanced = true;
    auto check = [&] {
      const auto& c = h.net->counters();
      if (c.injected != c.delivered + c.dropped + h.net->discipline().length() + c.in_flight)
        balanced = false;
    };
    for (int i = 0; i < 3000; ++i) {
      const auto at = SimTime::from_ns(static_cast<std::int64_t>(rng.below(3'000'000'000ULL)));
      const auto flow = static_cast<sim::FlowId>(rng.below(4));
      h.sched.schedule(at, [&, flow, i] {
        h.net->send_data(data(flow, static_cast<std::uint64_t>(i)));
        check();
      });
    }
    for (int i = 0; i < 400; ++i) h.sched.schedule(sec(i * 0.01), check);
    h.sched.run_until(sec(2));
    check();
    CHECK(balanced);
    h.sched.run_until(sec(100));
    const auto& c = h.net->counters();
    CHECK(c.injected == 3000);
    CHECK(c.in_flight == 0);
    CHECK(h.net->discipline().length() == 0);
    CHECK(c.delivered + c.dropped == 3000);
    CHECK(h.delivered == c.delivered);
    CHECK(h.dropped == c.dropped);
  }
}

TEST_CASE("bottleneck is work-conserving FIFO") {
  Harness h(std::make_unique<aqm::DropTailQueue>(aqm::Capacity::packets(100)));
  std::vector<std::uint64_t> seen;
  std::vector<SimTime> times;
  h.net->add_flow(0, [&](const sim::Packet& p) {
    seen.push_back(p.seq);
    times.push_back(h.sched.now());
  }, [](const sim::Packet&) {});
  h.sched.schedule(SimTime{}, [&] {
    for (std::uint64_t i = 0; i < 20; ++i) h.net->send_data(data(0, i));
  });
  h.sched.run_until(sec(5));
  REQUIRE(seen.size() == 20);
  for (std::uint64_t i = 0; i < 20; ++i) CHECK(seen[i] == i);
  // Once the queue builds, deliveries are spaced by one bottleneck slot.
  for (std::size_t i = 2; i < times.size(); ++i) CHECK((times[i] - times[i - 1]) == sec(0.008));
}
