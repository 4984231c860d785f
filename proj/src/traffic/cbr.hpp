#pragma once

#include <cstdint>
#include <functional>

#include "sim/packet.hpp"
#include "sim/scheduler.hpp"

namespace aqmsim::traffic {

// Constant-bit-rate source: fixed-size packets at exact, jitter-free spacing.
class CbrSource {
 public:
  using Transmit = std::function<void(const sim::Packet&)>;

  CbrSource(sim::FlowId flow, double rate_bps, std::uint32_t packet_size, sim::SimTime start);

  // Emits the packet due at next_send() and advances the schedule. Send
  // times are start + k * gap computed from k, so they never drift.
  sim::Packet emit(sim::SimTime now);

  sim::SimTime next_send() const { return next_send_; }
  sim::SimTime gap() const;
  double rate_bps() const { return rate_bps_; }
  std::uint64_t emitted() const { return emitted_; }

  // Drives emit() from the scheduler until the run ends.
  void attach(sim::Scheduler& scheduler, Transmit transmit);

 private:
  sim::SimTime send_time(std::uint64_t k) const;
  void fire();

  sim::FlowId flow_;
  double rate_bps_;
  std::uint32_t packet_size_;
  sim::SimTime start_;
  sim::SimTime next_send_;
  std::uint64_t emitted_ = 0;
  sim::Scheduler* scheduler_ = nullptr;
  Transmit transmit_;
};

}  // namespace aqmsim::traffic
