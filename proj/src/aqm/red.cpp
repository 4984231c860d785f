#include "aqm/red.hpp"

#include <algorithm>

namespace aqmsim::aqm {

void RedParams::validate(double buffer_packets, std::vector<std::string>& errors) const {
  if (!(min_th > 0)) errors.emplace_back("min_th: must be > 0");
  if (!(min_th < max_th)) errors.emplace_back("min_th: min_th < max_th required");
  if (max_th > buffer_packets) errors.emplace_back("max_th: max_th <= buffer capacity required");
  if (!(max_p > 0 && max_p <= 1)) errors.emplace_back("max_p: must lie in (0, 1]");
  if (!(w_q > 0 && w_q < 1)) errors.emplace_back("w_q: must lie in (0, 1)");
}

double ewma_update(double avg, double q, double w) { return (1.0 - w) * avg + w * q; }

double red_drop_probability(double avg, const RedParams& params, std::int64_t count) {
  if (avg < params.min_th) return 0.0;
  if (avg >= params.max_th) return 1.0;
  const double p_b = params.max_p * (avg - params.min_th) / (params.max_th - params.min_th);
  if (!params.count_spread) return p_b;
  const double denom = 1.0 - static_cast<double>(count) * p_b;
  if (denom <= 0.0) return 1.0;
  return std::clamp(p_b / denom, 0.0, 1.0);
}

Verdict red_enqueue(RedState& state, const RedParams& params, bool buffer_full, sim::Rng& rng) {
  if (buffer_full) {
    state.count = 0;
    return Verdict::drop;
  }
  if (state.avg < params.min_th) {
    state.count = 0;
    return Verdict::accept;
  }
  const double p = red_drop_probability(state.avg, params, state.count);
  if (rng.bernoulli(p)) {
    state.count = 0;
    return Verdict::drop;
  }
  ++state.count;
  return Verdict::accept;
}

RedQueue::RedQueue(Capacity capacity, RedParams params, sim::Rng rng)
    : QueueDiscipline(capacity), params_(params), rng_(rng) {}

Admission RedQueue::admit(const Packet& pkt, SimTime) {
  state_.avg = ewma_update(state_.avg, static_cast<double>(length()), params_.w_q);
  return {red_enqueue(state_, params_, full_for(pkt), rng_), {}};
}

}  // namespace aqmsim::aqm
