#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aqm/red.hpp"

namespace aqmsim::aqm {

struct ChokeParams {
  RedParams red;
  bool adaptive = true;             // A-CHOKe
  std::uint32_t cand_num = 1;       // candidates when not adaptive (1 = basic CHOKe)
  std::uint32_t interval_num = 5;   // regions between min_th and max_th when adaptive

  void validate(double buffer_packets, std::vector<std::string>& errors) const;
  bool operator==(const ChokeParams&) const = default;
};

// Number of drop candidates for an arrival seen at average `avg` (>= min_th).
// Adaptive mode splits [min_th, max_th) into interval_num regions and draws
// twice the 1-based region index; averages at or above max_th use the top region.
std::uint32_t choke_candidate_count(double avg, const ChokeParams& params);

// `count` distinct indices in [0, n), drawn uniformly without replacement,
// returned in ascending order. count is clamped to n.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count,
                                                    sim::Rng& rng);

class ChokeQueue final : public QueueDiscipline {
 public:
  ChokeQueue(Capacity capacity, ChokeParams params, sim::Rng rng);

  std::string_view name() const override { return "choke"; }
  const RedState& state() const { return state_; }
  const ChokeParams& params() const { return params_; }
  std::uint64_t candidate_matches() const { return matches_; }

  // Test hook; the next arrival still folds the current length into avg.
  void set_average(double avg) { state_.avg = avg; }

 protected:
  Admission admit(const Packet& pkt, SimTime now) override;

 private:
  ChokeParams params_;
  RedState state_;
  sim::Rng rng_;
  std::uint64_t matches_ = 0;
};

}  // namespace aqmsim::aqm
