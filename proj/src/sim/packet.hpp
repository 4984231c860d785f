#pragma once

#include <cstdint>

#include "sim/time.hpp"

namespace aqmsim::sim {

using FlowId = std::uint32_t;

enum class PacketKind : std::uint8_t { data, ack };
enum class TrafficClass : std::uint8_t { tcp, udp };

struct Packet {
  FlowId flow = 0;
  std::uint32_t size_bytes = 0;
  // Data: segment number. Ack: next in-order segment expected by the receiver.
  std::uint64_t seq = 0;
  PacketKind kind = PacketKind::data;
  TrafficClass cls = TrafficClass::tcp;
  SimTime created_at;
  // Acks echo the created_at of the data packet that triggered them.
  SimTime echo;
};

}  // namespace aqmsim::sim
