#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aqm/blue.hpp"
#include "aqm/choke.hpp"
#include "aqm/fred.hpp"
#include "aqm/red.hpp"
#include "aqm/sfb.hpp"

namespace aqmsim::aqm {

enum class DisciplineKind { droptail, red, fred, blue, sfb, choke };

std::string_view to_string(DisciplineKind kind);
std::optional<DisciplineKind> parse_discipline(std::string_view name);
const std::vector<DisciplineKind>& all_disciplines();

// Parameter blocks for every discipline; only the selected one is used.
// FRED and CHOKe read their thresholds from `red`.
struct DisciplineSpec {
  DisciplineKind kind = DisciplineKind::droptail;
  RedParams red;
  double fred_min_q = 2;
  bool fred_two_packet_mode = false;
  double fred_two_packet_threshold = 1.0;
  BlueParams blue;
  SfbParams sfb;
  bool choke_adaptive = true;
  std::uint32_t choke_cand_num = 1;
  std::uint32_t choke_interval_num = 5;

  FredParams fred() const;
  ChokeParams choke() const;

  void validate(const Capacity& buffer, std::uint32_t packet_size,
                std::vector<std::string>& errors) const;
  bool operator==(const DisciplineSpec&) const = default;
};

std::unique_ptr<QueueDiscipline> make_discipline(const DisciplineSpec& spec, Capacity buffer,
                                                 sim::Rng rng, std::uint32_t packet_size);

}  // namespace aqmsim::aqm
