#include "sim/scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "sim/rng.hpp"

namespace aqmsim::sim {

void Scheduler::schedule(SimTime at, Action action) {
  if (at < now_) {
    throw std::logic_error("Scheduler: event at " + std::to_string(at.ns()) +
                           " ns scheduled in the past (now " + std::to_string(now_.ns()) + " ns)");
  }
  heap_.push_back(Entry{at, next_seq_++, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

void Scheduler::run_until(SimTime end) {
  while (!heap_.empty() && heap_.front().time <= end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry entry = std::move(heap_.back());
    heap_.pop_back();
    now_ = entry.time;
    ++fired_;
    digest_ = splitmix64(digest_ ^ static_cast<std::uint64_t>(entry.time.ns())) ^ entry.seq;
    entry.action();
  }
  if (end > now_) now_ = end;
}

}  // namespace aqmsim::sim
