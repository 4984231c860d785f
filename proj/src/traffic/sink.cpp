#include "traffic/sink.hpp"

namespace aqmsim::traffic {

std::optional<sim::Packet> Sink::receive(const sim::Packet& pkt, sim::SimTime now,
                                         std::uint32_t ack_size) {
  FlowCounters& c = flows_[pkt.flow];
  c.bytes += pkt.size_bytes;
  ++c.packets;
  total_bytes_ += pkt.size_bytes;

  if (pkt.seq == c.next_expected) {
    ++c.next_expected;
    while (!c.out_of_order.empty() && *c.out_of_order.begin() == c.next_expected) {
      c.out_of_order.erase(c.out_of_order.begin());
      ++c.next_expected;
    }
  } else if (pkt.seq > c.next_expected) {
    c.out_of_order.insert(pkt.seq);
  }

  if (pkt.cls != sim::TrafficClass::tcp) return std::nullopt;
  sim::Packet ack;
  ack.flow = pkt.flow;
  ack.size_bytes = ack_size;
  ack.seq = c.next_expected;
  ack.kind = sim::PacketKind::ack;
  ack.cls = sim::TrafficClass::tcp;
  ack.created_at = now;
  ack.echo = pkt.created_at;
  return ack;
}

const Sink::FlowCounters* Sink::flow(sim::FlowId id) const {
  auto it = flows_.find(id);
  return it == flows_.end() ? nullptr : &it->second;
}

}  // namespace aqmsim::traffic
