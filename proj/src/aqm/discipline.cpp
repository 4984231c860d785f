#include "aqm/discipline.hpp"

#include <stdexcept>

namespace aqmsim::aqm {

double Capacity::in_packets(std::uint32_t packet_size) const {
  if (unit == Unit::packets) return static_cast<double>(value);
  return static_cast<double>(value) / static_cast<double>(packet_size);
}

QueueDiscipline::QueueDiscipline(Capacity capacity) : capacity_(capacity) {
  if (capacity.value == 0) throw std::invalid_argument("queue capacity must be > 0");
}

bool QueueDiscipline::full_for(const Packet& pkt) const {
  if (capacity_.unit == Capacity::Unit::packets) return fifo_.size() >= capacity_.value;
  return bytes_ + pkt.size_bytes > capacity_.value;
}

std::size_t QueueDiscipline::class_length(sim::TrafficClass cls) const {
  return cls == sim::TrafficClass::tcp ? tcp_packets_ : udp_packets_;
}

void QueueDiscipline::account(const Packet& pkt, int sign) {
  auto& per_class = pkt.cls == sim::TrafficClass::tcp ? tcp_packets_ : udp_packets_;
  if (sign > 0) {
    bytes_ += pkt.size_bytes;
    ++per_class;
  } else {
    bytes_ -= pkt.size_bytes;
    --per_class;
  }
}

Admission QueueDiscipline::enqueue(const Packet& pkt, SimTime now) {
  Admission admission = admit(pkt, now);
  // Physical overflow always wins over a policy accept.
  if (admission.accepted() && full_for(pkt)) admission.verdict = Verdict::drop;
  if (admission.accepted()) {
    fifo_.push_back(pkt);
    account(pkt, +1);
    on_enqueued(pkt, now);
  }
  return admission;
}

std::optional<Packet> QueueDiscipline::dequeue(SimTime now) {
  if (fifo_.empty()) {
    on_idle(now);
    return std::nullopt;
  }
  Packet pkt = fifo_.front();
  fifo_.pop_front();
  account(pkt, -1);
  on_departure(pkt, now);
  return pkt;
}

Packet QueueDiscipline::remove_at(std::size_t index) {
  if (index >= fifo_.size()) throw std::out_of_range("remove_at: index past queue end");
  Packet pkt = fifo_[index];
  fifo_.erase(fifo_.begin() + static_cast<std::ptrdiff_t>(index));
  account(pkt, -1);
  return pkt;
}

Verdict droptail_enqueue(std::size_t qlen, std::size_t capacity) {
  return qlen < capacity ? Verdict::accept : Verdict::drop;
}

Admission DropTailQueue::admit(const Packet& pkt, SimTime) {
  return {full_for(pkt) ? Verdict::drop : Verdict::accept, {}};
}

}  // namespace aqmsim::aqm
