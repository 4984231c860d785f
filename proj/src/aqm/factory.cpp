#include "aqm/factory.hpp"

#include <array>

namespace aqmsim::aqm {

namespace {

constexpr std::array<std::pair<DisciplineKind, std::string_view>, 6> kNames{{
    {DisciplineKind::droptail, "droptail"},
    {DisciplineKind::red, "red"},
    {DisciplineKind::fred, "fred"},
    {DisciplineKind::blue, "blue"},
    {DisciplineKind::sfb, "sfb"},
    {DisciplineKind::choke, "choke"},
}};

void prefix_errors(std::string_view prefix, std::vector<std::string>& errors, std::size_t from) {
  for (std::size_t i = from; i < errors.size(); ++i) errors[i] = std::string(prefix) + errors[i];
}

}  // namespace

std::string_view to_string(DisciplineKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<DisciplineKind> parse_discipline(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

const std::vector<DisciplineKind>& all_disciplines() {
  static const std::vector<DisciplineKind> kinds = [] {
    std::vector<DisciplineKind> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return kinds;
}

FredParams DisciplineSpec::fred() const {
  return FredParams{red, fred_min_q, fred_two_packet_mode, fred_two_packet_threshold};
}

ChokeParams DisciplineSpec::choke() const {
  return ChokeParams{red, choke_adaptive, choke_cand_num, choke_interval_num};
}

void DisciplineSpec::validate(const Capacity& buffer, std::uint32_t packet_size,
                              std::vector<std::string>& errors) const {
  const double buffer_packets = buffer.in_packets(packet_size);
  std::size_t mark = errors.size();
  switch (kind) {
    case DisciplineKind::droptail:
      break;
    case DisciplineKind::red:
      red.validate(buffer_packets, errors);
      prefix_errors("discipline.red.", errors, mark);
      break;
    case DisciplineKind::fred:
      red.validate(buffer_packets, errors);
      prefix_errors("discipline.red.", errors, mark);
      mark = errors.size();
      if (!(fred_min_q >= 1)) errors.emplace_back("min_q: must be >= 1");
      if (!(fred_two_packet_threshold > 0 && fred_two_packet_threshold <= 1))
        errors.emplace_back("two_packet_threshold: must lie in (0, 1]");
      prefix_errors("discipline.fred.", errors, mark);
      break;
    case DisciplineKind::blue:
      blue.validate(errors);
      prefix_errors("discipline.blue.", errors, mark);
      break;
    case DisciplineKind::sfb:
      sfb.validate(errors);
      prefix_errors("discipline.sfb.", errors, mark);
      break;
    case DisciplineKind::choke:
      red.validate(buffer_packets, errors);
      prefix_errors("discipline.red.", errors, mark);
      mark = errors.size();
      if (choke_cand_num < 1) errors.emplace_back("cand_num: must be >= 1");
      if (choke_interval_num < 1) errors.emplace_back("interval_num: must be >= 1");
      prefix_errors("discipline.choke.", errors, mark);
      break;
  }
}

std::unique_ptr<QueueDiscipline> make_discipline(const DisciplineSpec& spec, Capacity buffer,
                                                 sim::Rng rng, std::uint32_t packet_size) {
  switch (spec.kind) {
    case DisciplineKind::droptail:
      return std::make_unique<DropTailQueue>(buffer);
    case DisciplineKind::red:
      return std::make_unique<RedQueue>(buffer, spec.red, rng);
    case DisciplineKind::fred:
      return std::make_unique<FredQueue>(buffer, spec.fred(), rng);
    case DisciplineKind::blue:
      return std::make_unique<BlueQueue>(buffer, spec.blue, rng);
    case DisciplineKind::sfb:
      return std::make_unique<SfbQueue>(buffer, spec.sfb, rng, packet_size);
    case DisciplineKind::choke:
      return std::make_unique<ChokeQueue>(buffer, spec.choke(), rng);
  }
  return nullptr;
}

}  // namespace aqmsim::aqm
