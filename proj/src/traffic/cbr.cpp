#include "traffic/cbr.hpp"

#include <cmath>
#include <stdexcept>

namespace aqmsim::traffic {

CbrSource::CbrSource(sim::FlowId flow, double rate_bps, std::uint32_t packet_size,
                     sim::SimTime start)
    : flow_(flow), rate_bps_(rate_bps), packet_size_(packet_size), start_(start), next_send_(start) {
  if (!(rate_bps > 0)) throw std::invalid_argument("CbrSource: rate_bps must be > 0");
  if (packet_size == 0) throw std::invalid_argument("CbrSource: packet_size must be > 0");
}

sim::SimTime CbrSource::gap() const { return sim::serialization_time(packet_size_, rate_bps_); }

sim::SimTime CbrSource::send_time(std::uint64_t k) const {
  const double ns = static_cast<double>(k) * packet_size_ * 8.0 * 1e9 / rate_bps_;
  return start_ + sim::SimTime::from_ns(std::llround(ns));
}

sim::Packet CbrSource::emit(sim::SimTime now) {
  sim::Packet pkt;
  pkt.flow = flow_;
  pkt.size_bytes = packet_size_;
  pkt.seq = emitted_;
  pkt.kind = sim::PacketKind::data;
  pkt.cls = sim::TrafficClass::udp;
  pkt.created_at = now;
  ++emitted_;
  next_send_ = send_time(emitted_);
  return pkt;
}

void CbrSource::attach(sim::Scheduler& scheduler, Transmit transmit) {
  scheduler_ = &scheduler;
  transmit_ = std::move(transmit);
  scheduler_->schedule(next_send_, [this] { fire(); });
}

void CbrSource::fire() {
  transmit_(emit(scheduler_->now()));
  scheduler_->schedule(next_send_, [this] { fire(); });
}

}  // namespace aqmsim::traffic
