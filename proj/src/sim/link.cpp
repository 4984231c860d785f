#include "sim/link.hpp"

#include <algorithm>
#include <stdexcept>

namespace aqmsim::sim {

Link::Link(double bandwidth_bps, SimTime prop_delay)
    : bandwidth_bps_(bandwidth_bps), prop_delay_(prop_delay) {
  if (!(bandwidth_bps > 0.0)) throw std::invalid_argument("Link: bandwidth_bps must be > 0");
  if (prop_delay < SimTime{}) throw std::invalid_argument("Link: negative propagation delay");
}

SimTime Link::serialization(std::uint32_t size_bytes) const {
  return serialization_time(size_bytes, bandwidth_bps_);
}

SimTime Link::transmit(std::uint32_t size_bytes, SimTime now) {
  const SimTime start = std::max(now, busy_until_);
  busy_until_ = start + serialization(size_bytes);
  return busy_until_ + prop_delay_;
}

}  // namespace aqmsim::sim
