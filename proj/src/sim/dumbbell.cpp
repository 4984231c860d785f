#include "sim/dumbbell.hpp"

#include <stdexcept>
#include <string>

namespace aqmsim::sim {

Dumbbell::Dumbbell(Scheduler& scheduler, DumbbellConfig config,
                   std::unique_ptr<aqm::QueueDiscipline> discipline, Observer observer)
    : scheduler_(scheduler),
      config_(config),
      discipline_(std::move(discipline)),
      observer_(std::move(observer)),
      bottleneck_(config.bottleneck_bandwidth_bps, config.bottleneck_delay),
      reverse_bottleneck_(config.bottleneck_bandwidth_bps, config.bottleneck_delay) {
  if (!discipline_) throw std::invalid_argument("Dumbbell: null queue discipline");
}

void Dumbbell::add_flow(FlowId flow, Handler at_sink, Handler at_source) {
  const Link access{config_.access_bandwidth_bps, config_.access_delay};
  auto [it, inserted] = endpoints_.try_emplace(
      flow, Endpoint{access, access, access, access, std::move(at_sink), std::move(at_source)});
  if (!inserted) throw std::invalid_argument("Dumbbell: duplicate flow " + std::to_string(flow));
}

Dumbbell::Endpoint& Dumbbell::endpoint(FlowId flow) {
  auto it = endpoints_.find(flow);
  if (it == endpoints_.end()) throw std::out_of_range("Dumbbell: unknown flow " + std::to_string(flow));
  return it->second;
}

void Dumbbell::send_data(const Packet& pkt) {
  Endpoint& ep = endpoint(pkt.flow);
  ++counters_.injected;
  ++counters_.in_flight;
  const SimTime at = ep.source_up.transmit(pkt.size_bytes, scheduler_.now());
  scheduler_.schedule(at, [this, pkt] {
    --counters_.in_flight;
    arrive_at_router(pkt);
  });
}

void Dumbbell::send_ack(const Packet& pkt) {
  Endpoint& ep = endpoint(pkt.flow);
  const SimTime at_g2 = ep.sink_up.transmit(pkt.size_bytes, scheduler_.now());
  scheduler_.schedule(at_g2, [this, pkt] {
    const SimTime at_g1 = reverse_bottleneck_.transmit(pkt.size_bytes, scheduler_.now());
    scheduler_.schedule(at_g1, [this, pkt] {
      Endpoint& back = endpoint(pkt.flow);
      const SimTime at_src = back.source_down.transmit(pkt.size_bytes, scheduler_.now());
      scheduler_.schedule(at_src, [this, pkt] { endpoint(pkt.flow).at_source(pkt); });
    });
  });
}

void Dumbbell::record_drop(const Packet& pkt) {
  ++counters_.dropped;
  if (observer_.on_drop) observer_.on_drop(pkt, scheduler_.now());
}

void Dumbbell::arrive_at_router(const Packet& pkt) {
  aqm::Admission admission = discipline_->enqueue(pkt, scheduler_.now());
  for (const Packet& evicted : admission.evicted) record_drop(evicted);
  if (!admission.accepted()) record_drop(pkt);
  if (observer_.on_queue_change) observer_.on_queue_change(*discipline_, scheduler_.now());
  if (admission.accepted() && !transmitting_) start_transmission();
}

void Dumbbell::start_transmission() {
  std::optional<Packet> next = discipline_->dequeue(scheduler_.now());
  if (!next) {
    transmitting_ = false;
    return;
  }
  if (observer_.on_queue_change) observer_.on_queue_change(*discipline_, scheduler_.now());
  transmitting_ = true;
  ++counters_.in_flight;
  const Packet pkt = *next;
  const SimTime delivery = bottleneck_.transmit(pkt.size_bytes, scheduler_.now());
  scheduler_.schedule(bottleneck_.busy_until(), [this] { start_transmission(); });
  scheduler_.schedule(delivery, [this, pkt] {
    Endpoint& ep = endpoint(pkt.flow);
    const SimTime at_sink = ep.sink_down.transmit(pkt.size_bytes, scheduler_.now());
    scheduler_.schedule(at_sink, [this, pkt] {
      --counters_.in_flight;
      ++counters_.delivered;
      if (observer_.on_deliver) observer_.on_deliver(pkt, scheduler_.now());
      endpoint(pkt.flow).at_sink(pkt);
    });
  });
}

}  // namespace aqmsim::sim
