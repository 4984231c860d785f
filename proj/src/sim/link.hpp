#pragma once

#include <cstdint>

#include "sim/time.hpp"

namespace aqmsim::sim {

// Point-to-point link: one packet serializes at a time, later packets wait
// behind busy_until.
class Link {
 public:
  // Throws std::invalid_argument unless bandwidth_bps > 0 and delay >= 0.
  Link(double bandwidth_bps, SimTime prop_delay);

  // Starts serialization at max(now, busy_until) and returns the time the
  // last bit reaches the far end.
  SimTime transmit(std::uint32_t size_bytes, SimTime now);

  SimTime serialization(std::uint32_t size_bytes) const;
  bool idle(SimTime now) const { return busy_until_ <= now; }

  double bandwidth_bps() const { return bandwidth_bps_; }
  SimTime prop_delay() const { return prop_delay_; }
  SimTime busy_until() const { return busy_until_; }

 private:
  double bandwidth_bps_;
  SimTime prop_delay_;
  SimTime busy_until_;
};

}  // namespace aqmsim::sim
