#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "aqm/red.hpp"

namespace aqmsim::aqm {

struct FredParams {
  RedParams red;
  double min_q = 2;  // packets each flow may always buffer
  // Experimental: once total occupancy reaches two_packet_threshold of the
  // buffer, every flow is capped at two buffered packets.
  bool two_packet_mode = false;
  double two_packet_threshold = 1.0;

  void validate(double buffer_packets, std::vector<std::string>& errors) const;
  bool operator==(const FredParams&) const = default;
};

// Per-active-flow record; exists only while the flow has packets queued.
struct FlowAccount {
  sim::FlowId flow = 0;
  std::uint32_t qlen = 0;
  std::uint32_t strike = 0;
};

struct FredGlobals {
  double avgcq = 0;           // average buffered packets per active flow
  std::size_t n_active = 0;   // flows with qlen > 0
  double max_q = 0;           // per-flow cap used by the last arrival
};

class FredQueue final : public QueueDiscipline {
 public:
  FredQueue(Capacity capacity, FredParams params, sim::Rng rng);

  std::string_view name() const override { return "fred"; }

  const FredParams& params() const { return params_; }
  const FredGlobals& globals() const { return globals_; }
  const RedState& red_state() const { return red_; }
  std::optional<FlowAccount> account(sim::FlowId flow) const;
  const std::map<sim::FlowId, FlowAccount>& accounts() const { return accounts_; }
  const sim::Rng& rng() const { return rng_; }

  // Test hooks for positioning the average before an arrival. The arrival
  // still folds the instantaneous length into avg.
  void set_average(double avg) { red_.avg = avg; }
  void set_strike(sim::FlowId flow, std::uint32_t strike);

  // Per-flow buffer cap for a given average queue length.
  double max_q_for(double avg) const;

 protected:
  Admission admit(const Packet& pkt, SimTime now) override;
  void on_enqueued(const Packet& pkt, SimTime now) override;
  void on_departure(const Packet& pkt, SimTime now) override;

 private:
  void refresh_avgcq();

  FredParams params_;
  RedState red_;
  FredGlobals globals_;
  std::map<sim::FlowId, FlowAccount> accounts_;
  sim::Rng rng_;
};

}  // namespace aqmsim::aqm
