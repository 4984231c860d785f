#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace aqmsim::sim {

// Simulation clock value in integer nanoseconds. Also used for durations,
// which is why the representation is signed.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime from_ns(std::int64_t ns) { return SimTime{ns}; }
  static SimTime from_seconds(double seconds);

  // Sentinel for "never happened"; far enough from the int64 edge that
  // subtracting a realistic time cannot overflow.
  static constexpr SimTime never() {
    return SimTime{std::numeric_limits<std::int64_t>::min() / 4};
  }
  static constexpr SimTime infinity() {
    return SimTime{std::numeric_limits<std::int64_t>::max() / 4};
  }

  constexpr std::int64_t ns() const { return ns_; }
  constexpr double seconds() const { return static_cast<double>(ns_) * 1e-9; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(SimTime other) const { return SimTime{ns_ + other.ns_}; }
  constexpr SimTime operator-(SimTime other) const { return SimTime{ns_ - other.ns_}; }
  constexpr SimTime& operator+=(SimTime other) {
    ns_ += other.ns_;
    return *this;
  }

 private:
  constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

// Time to clock `bytes` onto a link of `bandwidth_bps`, rounded to the nearest ns.
SimTime serialization_time(std::uint64_t bytes, double bandwidth_bps);

}  // namespace aqmsim::sim
