#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "sim/packet.hpp"

namespace aqmsim::traffic {

// Per-flow receive counters. TCP flows additionally get cumulative acks.
class Sink {
 public:
  struct FlowCounters {
    std::uint64_t bytes = 0;    // every data byte that arrived, duplicates included
    std::uint64_t packets = 0;
    std::uint64_t next_expected = 0;  // highest in-order seq + 1
    std::set<std::uint64_t> out_of_order;
  };

  // Records `pkt`; for TCP data returns the ack to send back.
  std::optional<sim::Packet> receive(const sim::Packet& pkt, sim::SimTime now,
                                     std::uint32_t ack_size = 40);

  const FlowCounters* flow(sim::FlowId id) const;
  std::uint64_t total_bytes() const { return total_bytes_; }

 private:
  std::map<sim::FlowId, FlowCounters> flows_;
  std::uint64_t total_bytes_ = 0;
};

}  // namespace aqmsim::traffic
