#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>

#include "aqm/discipline.hpp"
#include "sim/link.hpp"
#include "sim/packet.hpp"
#include "sim/scheduler.hpp"

namespace aqmsim::sim {

struct DumbbellConfig {
  double access_bandwidth_bps = 10e6;
  SimTime access_delay = SimTime::from_ns(1'000'000);
  double bottleneck_bandwidth_bps = 1e6;
  SimTime bottleneck_delay = SimTime::from_ns(10'000'000);
};

// N sources -> gateway G1 -> bottleneck -> gateway G2 -> N sinks, with a
// mirror-image reverse path for acks. G1 hosts the queue discipline; every
// other hop is an unbounded FIFO that never drops.
class Dumbbell {
 public:
  using Handler = std::function<void(const Packet&)>;

  struct Observer {
    std::function<void(const Packet&, SimTime)> on_drop;
    std::function<void(const Packet&, SimTime)> on_deliver;
    // Fires after every arrival at and every departure from the bottleneck queue.
    std::function<void(const aqm::QueueDiscipline&, SimTime)> on_queue_change;
  };

  // Data packets only; these reconcile exactly at any instant:
  // injected == delivered + dropped + queued + in_flight.
  struct Counters {
    std::uint64_t injected = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight = 0;
  };

  Dumbbell(Scheduler& scheduler, DumbbellConfig config,
           std::unique_ptr<aqm::QueueDiscipline> discipline, Observer observer = {});

  // `at_sink` receives data packets, `at_source` receives acks.
  void add_flow(FlowId flow, Handler at_sink, Handler at_source);

  void send_data(const Packet& pkt);
  void send_ack(const Packet& pkt);

  const aqm::QueueDiscipline& discipline() const { return *discipline_; }
  const Counters& counters() const { return counters_; }
  const DumbbellConfig& config() const { return config_; }
  bool bottleneck_busy() const { return transmitting_; }

 private:
  struct Endpoint {
    Link source_up;   // source -> G1
    Link sink_down;   // G2 -> sink
    Link sink_up;     // sink -> G2
    Link source_down; // G1 -> source
    Handler at_sink;
    Handler at_source;
  };

  Endpoint& endpoint(FlowId flow);
  void arrive_at_router(const Packet& pkt);
  void start_transmission();
  void record_drop(const Packet& pkt);

  Scheduler& scheduler_;
  DumbbellConfig config_;
  std::unique_ptr<aqm::QueueDiscipline> discipline_;
  Observer observer_;
  Link bottleneck_;
  Link reverse_bottleneck_;
  bool transmitting_ = false;
  std::map<FlowId, Endpoint> endpoints_;
  Counters counters_;
};

}  // namespace aqmsim::sim
