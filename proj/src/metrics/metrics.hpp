#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aqm/discipline.hpp"
#include "sim/packet.hpp"
#include "sim/time.hpp"

namespace aqmsim::metrics {

using sim::SimTime;

struct FlowStats {
  sim::FlowId flow = 0;
  sim::TrafficClass cls = sim::TrafficClass::tcp;
  std::uint64_t delivered_bytes = 0;   // inside the measurement window
  std::uint64_t dropped_packets = 0;   // inside the measurement window
  double throughput_bps = 0;           // delivered_bytes * 8 / window
  std::uint64_t total_delivered_bytes = 0;  // whole run
  std::uint64_t total_dropped_packets = 0;  // whole run
};

struct QueueTraceSample {
  double time_s = 0;
  std::uint64_t total_qlen = 0;
  std::uint64_t tcp_qlen = 0;
  std::uint64_t udp_qlen = 0;
  double ewma_qlen = 0;
  double ewma_tcp = 0;
  double ewma_udp = 0;
};

struct QueueCounts {
  std::uint64_t total = 0;
  std::uint64_t tcp = 0;
  std::uint64_t udp = 0;
};

// Splits queue contents by traffic class.
QueueCounts classify(const std::deque<sim::Packet>& contents);

// Queue-length EWMA plus a time-downsampled trace of it.
class QueueMonitor {
 public:
  explicit QueueMonitor(double weight = 0.002,
                        SimTime sample_interval = SimTime::from_ns(10'000'000));

  // Call on every enqueue and dequeue. The EWMA sees every call; the trace
  // keeps at most one sample per sample_interval.
  void record(SimTime now, QueueCounts counts);
  void record_queue_sample(SimTime now, const std::deque<sim::Packet>& contents) {
    record(now, classify(contents));
  }

  double ewma() const { return ewma_total_; }
  double ewma_tcp() const { return ewma_tcp_; }
  double ewma_udp() const { return ewma_udp_; }
  std::uint64_t updates() const { return updates_; }
  const std::vector<QueueTraceSample>& trace() const { return trace_; }

  // Mean of traced EWMA values with time in [from, to].
  double mean_ewma(double from_s, double to_s) const;
  double mean_ewma_tcp(double from_s, double to_s) const;
  double mean_ewma_udp(double from_s, double to_s) const;

 private:
  double weight_;
  SimTime interval_;
  SimTime next_sample_;
  double ewma_total_ = 0;
  double ewma_tcp_ = 0;
  double ewma_udp_ = 0;
  std::uint64_t updates_ = 0;
  std::vector<QueueTraceSample> trace_;
};

// Jain's fairness index (sum x)^2 / (n * sum x^2). Throws std::domain_error
// for an empty list, negative entries or an all-zero list.
double jain_index(std::span<const double> throughputs);

// Fraction of the bottleneck carried; duration must be > 0.
double utilization(double delivered_bits, double bottleneck_bps, double duration_s);

// Tallies deliveries and drops per flow, splitting out the measurement window.
class FlowMeter {
 public:
  FlowMeter(double window_start_s, double window_end_s);

  void add_flow(sim::FlowId flow, sim::TrafficClass cls);
  void on_deliver(const sim::Packet& pkt, SimTime now);
  void on_drop(const sim::Packet& pkt, SimTime now);

  std::vector<FlowStats> finish() const;
  double window_s() const { return window_end_ - window_start_; }

 private:
  bool in_window(SimTime now) const;

  double window_start_;
  double window_end_;
  std::vector<FlowStats> flows_;  // indexed by position in flow_index_
  std::vector<std::pair<sim::FlowId, std::size_t>> flow_index_;
  FlowStats& stats(sim::FlowId flow);
};

}  // namespace aqmsim::metrics
