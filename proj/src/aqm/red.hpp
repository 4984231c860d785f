#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aqm/discipline.hpp"
#include "sim/rng.hpp"

namespace aqmsim::aqm {

struct RedParams {
  double min_th = 50;   // packets
  double max_th = 100;  // packets
  double max_p = 0.02;
  double w_q = 0.002;
  // Spread drops with p_a = p_b / (1 - count * p_b).
  bool count_spread = true;

  // Appends "field: reason" strings for every violated constraint.
  void validate(double buffer_packets, std::vector<std::string>& errors) const;

  bool operator==(const RedParams&) const = default;
};

struct RedState {
  double avg = 0;          // EWMA queue length, packets
  std::int64_t count = 0;  // arrivals since the last drop
};

// (1 - w) * avg + w * q
double ewma_update(double avg, double q, double w);

// Drop probability for a given average. 0 below min_th, 1 at or above
// max_th; in between the linear ramp to max_p, spread by `count` when
// count_spread is set.
double red_drop_probability(double avg, const RedParams& params, std::int64_t count);

// Admission decision with `state.avg` already refreshed for this arrival.
Verdict red_enqueue(RedState& state, const RedParams& params, bool buffer_full, sim::Rng& rng);

class RedQueue final : public QueueDiscipline {
 public:
  RedQueue(Capacity capacity, RedParams params, sim::Rng rng);

  std::string_view name() const override { return "red"; }
  const RedState& state() const { return state_; }
  const RedParams& params() const { return params_; }

 protected:
  Admission admit(const Packet& pkt, SimTime now) override;

 private:
  RedParams params_;
  RedState state_;
  sim::Rng rng_;
};

}  // namespace aqmsim::aqm
