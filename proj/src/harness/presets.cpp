#include "harness/presets.hpp"

#include <fmt/format.h>
#include <functional>
#include <utility>

namespace aqmsim::harness {

namespace {

using aqm::DisciplineKind;

// 10 TCP + 1 UDP at 8 Mbps over a 1 Mbps bottleneck, 150-packet buffer.
ScenarioConfig baseline(DisciplineKind kind) {
  ScenarioConfig c;
  c.discipline.kind = kind;
  return c;
}

SweepSpec sweep_of(std::vector<std::string> parameters, std::vector<std::vector<std::string>> points,
                   std::uint32_t repetitions = 1) {
  return SweepSpec{std::move(parameters), std::move(points), repetitions};
}

SweepSpec single_key_sweep(std::string parameter, const std::vector<std::string>& values,
                           std::uint32_t repetitions = 1) {
  std::vector<std::vector<std::string>> points;
  for (const auto& v : values) points.push_back({v});
  return sweep_of({std::move(parameter)}, std::move(points), repetitions);
}

// 49 long-lived TCP flows with a 300-packet window and a byte-sized buffer.
ScenarioConfig many_tcp(DisciplineKind kind, std::uint64_t buffer_bytes, bool with_udp) {
  ScenarioConfig c;
  c.discipline.kind = kind;
  c.tcp.flows = 49;
  c.tcp.max_window = 300;
  c.buffer = aqm::Capacity::bytes(buffer_bytes);
  c.topology.bottleneck_bandwidth_bps = 1e6;
  c.udp.flows = with_udp ? 1 : 0;
  if (with_udp) {
    c.udp.rate_bps = 40e6;
    c.topology.access_bandwidth_bps = 100e6;
  }
  return c;
}

using Builder = std::function<ScenarioDocument()>;

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> table = [] {
    std::vector<std::pair<std::string, Builder>> t;
    t.emplace_back("baseline", [] { return ScenarioDocument{baseline(DisciplineKind::red), {}}; });
    for (auto kind : aqm::all_disciplines()) {
      const std::string name(aqm::to_string(kind));
      t.emplace_back("baseline-" + name, [kind] { return ScenarioDocument{baseline(kind), {}}; });
    }
    for (auto kind : aqm::all_disciplines()) {
      const std::string name(aqm::to_string(kind));
      t.emplace_back("fig4-sweep-" + name, [kind] {
        return ScenarioDocument{
            baseline(kind),
            single_key_sweep("udp.rate_bps", {"100000", "250000", "500000", "1000000", "2000000",
                                              "4000000", "8000000"})};
      });
    }
    t.emplace_back("fig5-traces", [] {
      std::vector<std::string> names;
      for (auto kind : aqm::all_disciplines()) names.emplace_back(aqm::to_string(kind));
      return ScenarioDocument{baseline(DisciplineKind::droptail),
                              single_key_sweep("discipline", names)};
    });
    t.emplace_back("table1-fred", [] {
      ScenarioConfig c = baseline(DisciplineKind::fred);
      c.udp.rate_bps = 2e6;
      c.topology.access_bandwidth_bps = 100e6;
      return ScenarioDocument{
          c, single_key_sweep("topology.bottleneck_bandwidth_bps",
                              {"500000", "1000000", "2000000", "4000000", "8000000", "10000000",
                               "20000000"})};
    });
    t.emplace_back("fred-buffer-sensitivity", [] {
      // Thresholds scale with the buffer: min_th = B/3, max_th = 2B/3.
      std::vector<std::vector<std::string>> points;
      for (int b : {15, 30, 60, 90, 120, 150}) {
        points.push_back({std::to_string(b), std::to_string(b / 3), std::to_string(2 * b / 3)});
      }
      return ScenarioDocument{
          baseline(DisciplineKind::fred),
          sweep_of({"buffer.capacity", "discipline.red.min_th", "discipline.red.max_th"}, points)};
    });
    t.emplace_back("blue-49tcp",
                   [] { return ScenarioDocument{many_tcp(DisciplineKind::blue, 300000, false), {}}; });
    t.emplace_back("blue-49tcp-1udp",
                   [] { return ScenarioDocument{many_tcp(DisciplineKind::blue, 300000, true), {}}; });
    t.emplace_back("sfb-49tcp",
                   [] { return ScenarioDocument{many_tcp(DisciplineKind::sfb, 150000, false), {}}; });
    t.emplace_back("sfb-49tcp-1udp",
                   [] { return ScenarioDocument{many_tcp(DisciplineKind::sfb, 150000, true), {}}; });
    t.emplace_back("sfb-boxtime", [] {
      return ScenarioDocument{many_tcp(DisciplineKind::sfb, 150000, true),
                              single_key_sweep("discipline.sfb.boxtime", {"0.5", "0.05", "0.02"})};
    });
    t.emplace_back("sfb-5udp-fairness", [] {
      ScenarioConfig c = baseline(DisciplineKind::sfb);
      c.udp.flows = 5;
      c.udp.rate_bps = 4e6;
      return ScenarioDocument{c, single_key_sweep("discipline.sfb.boxtime_jitter", {"0", "0.5"})};
    });
    t.emplace_back("choke-candidates", [] {
      ScenarioConfig c = baseline(DisciplineKind::choke);
      c.discipline.choke_adaptive = false;
      return ScenarioDocument{c, single_key_sweep("discipline.choke.cand_num", {"1", "2", "4", "8"})};
    });
    t.emplace_back("choke-intervals", [] {
      return ScenarioDocument{baseline(DisciplineKind::choke),
                              single_key_sweep("discipline.choke.interval_num", {"1", "2", "5", "10"})};
    });
    t.emplace_back("choke-flow-mix", [] {
      return ScenarioDocument{baseline(DisciplineKind::choke),
                              sweep_of({"tcp.flows", "udp.flows"}, {{"1", "1"}, {"10", "1"}, {"10", "5"}})};
    });
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

ScenarioDocument preset(std::string_view name) {
  for (const auto& [n, build] : registry())
    if (n == name) return build();
  throw ConfigError({fmt::format("unknown preset '{}'; available: {}", name,
                                 fmt::join(preset_names(), ", "))});
}

}  // namespace aqmsim::harness
