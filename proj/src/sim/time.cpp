#include "sim/time.hpp"

#include <cmath>
#include <stdexcept>

namespace aqmsim::sim {

SimTime SimTime::from_seconds(double seconds) {
  if (!std::isfinite(seconds)) throw std::invalid_argument("SimTime: non-finite seconds");
  return SimTime{std::llround(seconds * 1e9)};
}

SimTime serialization_time(std::uint64_t bytes, double bandwidth_bps) {
  if (!(bandwidth_bps > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  return SimTime::from_ns(std::llround(static_cast<double>(bytes) * 8.0 * 1e9 / bandwidth_bps));
}

}  // namespace aqmsim::sim
