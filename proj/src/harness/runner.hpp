#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "harness/config.hpp"
#include "metrics/metrics.hpp"
#include "sim/dumbbell.hpp"

namespace aqmsim::harness {

struct RunReport {
  std::vector<metrics::FlowStats> flows;  // UDP flows first, then TCP
  std::vector<metrics::QueueTraceSample> queue_trace;
  double window_s = 0;  // measurement window [warmup, duration]
  double bottleneck_bps = 0;
  double utilization = 0;
  double jain_index = 0;
  double tcp_share = 0;  // fractions of window-delivered bytes
  double udp_share = 0;
  double tcp_throughput_bps = 0;
  double udp_throughput_bps = 0;
  // Means of the traced EWMA over the measurement window, in packets.
  double mean_ewma_qlen = 0;
  double mean_ewma_tcp = 0;
  double mean_ewma_udp = 0;
  double buffer_packets = 0;
  sim::Dumbbell::Counters counters;
  std::uint64_t queued_at_end = 0;
  std::uint64_t sink_bytes = 0;  // every data byte that reached a sink
  std::uint64_t events = 0;
  std::uint64_t trace_digest = 0;
};

// Throws ConfigError when `config` does not validate.
RunReport run_scenario(const ScenarioConfig& config);

struct SweepRow {
  std::size_t point = 0;
  std::string label;  // the point's values joined by ':'
  std::uint64_t seed = 0;
  RunReport report;
};

struct SweepAggregate {
  std::size_t point = 0;
  std::string label;
  std::size_t runs = 0;
  double utilization = 0;
  double jain_index = 0;
  double tcp_share = 0;
  double udp_share = 0;
  double tcp_throughput_bps = 0;
  double udp_throughput_bps = 0;
  double mean_ewma_qlen = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // ordered by (point, repetition)

  std::vector<SweepAggregate> aggregates() const;
};

// Runs every (point, repetition) pair; `jobs` > 1 spreads them over threads.
SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& sweep, unsigned jobs = 1);

}  // namespace aqmsim::harness
