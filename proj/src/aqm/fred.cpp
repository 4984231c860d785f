#include "aqm/fred.hpp"

#include <algorithm>

namespace aqmsim::aqm {

void FredParams::validate(double buffer_packets, std::vector<std::string>& errors) const {
  red.validate(buffer_packets, errors);
  if (!(min_q >= 1)) errors.emplace_back("min_q: must be >= 1");
  if (!(two_packet_threshold > 0 && two_packet_threshold <= 1))
    errors.emplace_back("two_packet_threshold: must lie in (0, 1]");
}

FredQueue::FredQueue(Capacity capacity, FredParams params, sim::Rng rng)
    : QueueDiscipline(capacity), params_(params), rng_(rng) {}

std::optional<FlowAccount> FredQueue::account(sim::FlowId flow) const {
  auto it = accounts_.find(flow);
  if (it == accounts_.end()) return std::nullopt;
  return it->second;
}

void FredQueue::set_strike(sim::FlowId flow, std::uint32_t strike) {
  auto it = accounts_.find(flow);
  if (it != accounts_.end()) it->second.strike = strike;
}

double FredQueue::max_q_for(double avg) const {
  if (avg >= params_.red.max_th) return 2;
  if (params_.two_packet_mode) {
    const double fill = capacity().unit == Capacity::Unit::packets
                            ? static_cast<double>(length()) / static_cast<double>(capacity().value)
                            : static_cast<double>(bytes()) / static_cast<double>(capacity().value);
    if (fill >= params_.two_packet_threshold) return 2;
  }
  return params_.red.min_th;
}

void FredQueue::refresh_avgcq() {
  globals_.avgcq = globals_.n_active > 0 ? red_.avg / static_cast<double>(globals_.n_active)
                                         : red_.avg;
}

Admission FredQueue::admit(const Packet& pkt, SimTime) {
  const RedParams& red = params_.red;
  red_.avg = ewma_update(red_.avg, static_cast<double>(length()), red.w_q);
  refresh_avgcq();

  auto it = accounts_.find(pkt.flow);
  const double qlen = it == accounts_.end() ? 0.0 : static_cast<double>(it->second.qlen);
  const std::uint32_t strike = it == accounts_.end() ? 0 : it->second.strike;

  globals_.max_q = max_q_for(red_.avg);

  // Unresponsive flow: over its cap, far over its share under heavy load, or
  // a repeat offender above the per-flow average.
  if (qlen >= globals_.max_q || (red_.avg >= red.max_th && qlen > 2 * globals_.avgcq) ||
      (qlen >= globals_.avgcq && strike > 1)) {
    if (it != accounts_.end()) ++it->second.strike;
    red_.count = 0;
    return {Verdict::drop, {}};
  }

  if (red_.avg >= red.min_th && red_.avg < red.max_th) {
    if (qlen >= std::max(params_.min_q, globals_.avgcq)) {
      const double p = red_drop_probability(red_.avg, red, red_.count);
      if (rng_.bernoulli(p)) {
        red_.count = 0;
        return {Verdict::drop, {}};
      }
      ++red_.count;
    }
  } else if (red_.avg < red.min_th) {
    red_.count = 0;
  } else {
    red_.count = 0;
    return {Verdict::drop, {}};
  }

  if (full_for(pkt)) return {Verdict::drop, {}};
  return {Verdict::accept, {}};
}

void FredQueue::on_enqueued(const Packet& pkt, SimTime) {
  auto [it, inserted] = accounts_.try_emplace(pkt.flow, FlowAccount{pkt.flow, 0, 0});
  if (inserted) ++globals_.n_active;
  ++it->second.qlen;
}

void FredQueue::on_departure(const Packet& pkt, SimTime) {
  auto it = accounts_.find(pkt.flow);
  if (it != accounts_.end() && --it->second.qlen == 0) {
    accounts_.erase(it);
    --globals_.n_active;
  }
  red_.avg = ewma_update(red_.avg, static_cast<double>(length()), params_.red.w_q);
  refresh_avgcq();
}

}  // namespace aqmsim::aqm
