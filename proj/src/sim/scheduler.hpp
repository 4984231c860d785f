#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sim/time.hpp"

namespace aqmsim::sim {

// Discrete-event engine. Events fire in (time, insertion sequence) order, so
// simultaneous events run in the order they were scheduled.
class Scheduler {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  // Throws std::logic_error when `at` lies before now().
  void schedule(SimTime at, Action action);
  void schedule_in(SimTime delay, Action action) { schedule(now_ + delay, std::move(action)); }

  // Fires every event with time <= end, then leaves the clock at `end`.
  void run_until(SimTime end);

  bool empty() const { return heap_.empty(); }
  std::size_t pending() const { return heap_.size(); }
  std::uint64_t events_fired() const { return fired_; }
  // Order-sensitive hash over (time, sequence) of every fired event.
  std::uint64_t trace_digest() const { return digest_; }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::vector<Entry> heap_;
  SimTime now_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t fired_ = 0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

}  // namespace aqmsim::sim
