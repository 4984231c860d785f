#pragma once

#include "aqm/discipline.hpp"
#include "sim/rng.hpp"

#include <string>
#include <vector>

namespace aqmsim::aqm {

struct BlueParams {
  double d1 = 0.02;                                 // increment on loss
  double d2 = 0.002;                                // decrement on idle
  SimTime freeze_time = SimTime::from_ns(10'000'000);  // 10 ms

  void validate(std::vector<std::string>& errors) const;
  bool operator==(const BlueParams&) const = default;
};

// Loss/idle driven marking probability shared by BLUE and each SFB bin.
struct BlueState {
  double pm = 0;
  SimTime last_update = SimTime::never();

  // Both updates are ignored unless more than freeze_time has passed since
  // the previous one; pm stays inside [0, 1].
  void on_loss(SimTime now, double d1, SimTime freeze_time);
  void on_idle(SimTime now, double d2, SimTime freeze_time);
};

void blue_on_loss(BlueState& state, const BlueParams& params, SimTime now);
void blue_on_idle(BlueState& state, const BlueParams& params, SimTime now);

// Full buffer counts as a loss event; otherwise drop with probability pm.
Verdict blue_enqueue(BlueState& state, const BlueParams& params, bool buffer_full, SimTime now,
                     sim::Rng& rng);

class BlueQueue final : public QueueDiscipline {
 public:
  BlueQueue(Capacity capacity, BlueParams params, sim::Rng rng);

  std::string_view name() const override { return "blue"; }
  const BlueState& state() const { return state_; }
  BlueState& mutable_state() { return state_; }

 protected:
  Admission admit(const Packet& pkt, SimTime now) override;
  void on_idle(SimTime now) override;

 private:
  BlueParams params_;
  BlueState state_;
  sim::Rng rng_;
};

}  // namespace aqmsim::aqm
