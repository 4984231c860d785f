#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "aqm/blue.hpp"
#include "aqm/discipline.hpp"
#include "sim/rng.hpp"

namespace aqmsim::aqm {

struct SfbParams {
  std::uint32_t levels = 2;
  std::uint32_t bins = 23;  // per level
  double d1 = 0.005;
  double d2 = 0.001;
  SimTime freeze_time = SimTime::from_ns(1'000'000);  // 1 ms, per bin
  // bin_size = bin_size_factor / bins * buffer size (packets).
  double bin_size_factor = 1.5;
  SimTime boxtime = SimTime::from_ns(50'000'000);  // 50 ms
  // Fractional jitter applied to boxtime per decision; 0 disables.
  double boxtime_jitter = 0;
  SimTime h_interval = SimTime::from_ns(5'000'000'000);  // 5 s

  double bin_size(double buffer_packets) const;
  void validate(std::vector<std::string>& errors) const;
  bool operator==(const SfbParams&) const = default;
};

struct SfbBin {
  std::uint32_t qlen = 0;
  BlueState marking;

  double pm() const { return marking.pm; }
};

// Bin index of `flow` in one level; the salt selects the hash function.
std::uint32_t sfb_hash(sim::FlowId flow, std::uint32_t level, std::uint64_t salt,
                       std::uint32_t bins);

// L x N accounting bins plus the per-level salts that address them.
class SfbGrid {
 public:
  SfbGrid(std::uint32_t levels, std::uint32_t bins, std::vector<std::uint64_t> salts);

  std::uint32_t index(sim::FlowId flow, std::uint32_t level) const;
  SfbBin& at(std::uint32_t level, std::uint32_t index);
  const SfbBin& at(std::uint32_t level, std::uint32_t index) const;

  std::uint32_t levels() const { return levels_; }
  std::uint32_t bins() const { return bins_; }
  const std::vector<std::uint64_t>& salts() const { return salts_; }
  std::uint64_t level_occupancy(std::uint32_t level) const;

 private:
  std::uint32_t levels_;
  std::uint32_t bins_;
  std::vector<std::uint64_t> salts_;
  std::vector<SfbBin> cells_;
};

struct SfbState {
  SfbGrid active;
  SfbGrid warmup;  // fed the same traffic so it is ready at the next switch
  SimTime last_nonresponsive_enqueue = SimTime::never();
  SimTime next_hash_switch;
};

// Penalty box: admits a non-responsive packet only if more than
// (possibly jittered) boxtime has passed since the last one admitted.
Verdict sfb_ratelimit(SfbState& state, const SfbParams& params, SimTime now, sim::Rng& rng);

class SfbQueue final : public QueueDiscipline {
 public:
  SfbQueue(Capacity capacity, SfbParams params, sim::Rng rng, std::uint32_t packet_size = 1000);

  std::string_view name() const override { return "sfb"; }

  const SfbParams& params() const { return params_; }
  const SfbState& state() const { return state_; }
  SfbState& mutable_state() { return state_; }
  double bin_size() const { return bin_size_; }
  std::uint64_t rotations() const { return rotations_; }
  std::uint64_t ratelimited_arrivals() const { return ratelimited_; }

  // Minimum marking probability over the active bins `flow` maps to.
  double pmin(sim::FlowId flow) const;

  // Promotes the warm-up grid and starts warming a fresh one; queued packets
  // are re-counted into the new grid so bin sums always match the queue.
  void rotate_hashes(SimTime now);

 protected:
  Admission admit(const Packet& pkt, SimTime now) override;
  void on_enqueued(const Packet& pkt, SimTime now) override;
  void on_departure(const Packet& pkt, SimTime now) override;

 private:
  std::vector<std::uint64_t> fresh_salts();
  void maybe_rotate(SimTime now);

  SfbParams params_;
  sim::Rng rng_;
  double bin_size_;
  SfbState state_;
  // Bin indices recorded at admission, 2L per queued packet (active then
  // warm-up), in queue order.
  std::deque<std::uint32_t> slots_;
  std::vector<std::uint32_t> pending_;
  std::uint64_t rotations_ = 0;
  std::uint64_t ratelimited_ = 0;
};

}  // namespace aqmsim::aqm
