#include "aqm/blue.hpp"

#include <algorithm>

namespace aqmsim::aqm {

void BlueParams::validate(std::vector<std::string>& errors) const {
  if (!(d1 > 0 && d1 <= 1)) errors.emplace_back("d1: must lie in (0, 1]");
  if (!(d2 > 0 && d2 <= 1)) errors.emplace_back("d2: must lie in (0, 1]");
  if (freeze_time < SimTime{}) errors.emplace_back("freeze_time: must be >= 0");
}

void BlueState::on_loss(SimTime now, double d1, SimTime freeze_time) {
  if (now - last_update <= freeze_time) return;
  pm = std::min(1.0, pm + d1);
  last_update = now;
}

void BlueState::on_idle(SimTime now, double d2, SimTime freeze_time) {
  if (now - last_update <= freeze_time) return;
  pm = std::max(0.0, pm - d2);
  last_update = now;
}

void blue_on_loss(BlueState& state, const BlueParams& params, SimTime now) {
  state.on_loss(now, params.d1, params.freeze_time);
}

void blue_on_idle(BlueState& state, const BlueParams& params, SimTime now) {
  state.on_idle(now, params.d2, params.freeze_time);
}

Verdict blue_enqueue(BlueState& state, const BlueParams& params, bool buffer_full, SimTime now,
                     sim::Rng& rng) {
  if (buffer_full) {
    blue_on_loss(state, params, now);
    return Verdict::drop;
  }
  return rng.bernoulli(state.pm) ? Verdict::drop : Verdict::accept;
}

BlueQueue::BlueQueue(Capacity capacity, BlueParams params, sim::Rng rng)
    : QueueDiscipline(capacity), params_(params), rng_(rng) {}

Admission BlueQueue::admit(const Packet& pkt, SimTime now) {
  return {blue_enqueue(state_, params_, full_for(pkt), now, rng_), {}};
}

void BlueQueue::on_idle(SimTime now) { blue_on_idle(state_, params_, now); }

}  // namespace aqmsim::aqm
