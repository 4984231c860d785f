#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aqm/factory.hpp"
#include "traffic/tcp.hpp"

namespace aqmsim::harness {

struct Topology {
  double access_bandwidth_bps = 10e6;
  double access_delay_s = 0.001;
  double bottleneck_bandwidth_bps = 1e6;
  double bottleneck_delay_s = 0.01;

  bool operator==(const Topology&) const = default;
};

struct TcpTraffic {
  std::uint32_t flows = 10;
  std::uint32_t max_window = 50;  // packets
  traffic::TcpVariant variant = traffic::TcpVariant::reno;
  double start_interval_s = 0.1;  // flow i starts at i * start_interval_s

  bool operator==(const TcpTraffic&) const = default;
};

struct UdpTraffic {
  std::uint32_t flows = 1;
  double rate_bps = 8e6;  // per flow
  double start_s = 0;

  bool operator==(const UdpTraffic&) const = default;
};

struct ScenarioConfig {
  Topology topology;
  aqm::Capacity buffer = aqm::Capacity::packets(150);
  std::uint32_t packet_size = 1000;
  aqm::DisciplineSpec discipline;
  TcpTraffic tcp;
  UdpTraffic udp;
  double duration_s = 100;
  double warmup_s = 10;
  std::uint64_t seed = 1;
  double ewma_weight = 0.002;
  double sample_interval_s = 0.01;
  std::string out_dir;

  // Every violated constraint as "key: reason"; empty when valid.
  std::vector<std::string> validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

// One or more keys varied together; each point assigns one value per key.
struct SweepSpec {
  std::vector<std::string> parameters;
  std::vector<std::vector<std::string>> points;
  std::uint32_t repetitions = 1;  // seeds base.seed, base.seed + 1, ...

  std::string label(std::size_t point) const;
  bool operator==(const SweepSpec&) const = default;
};

struct ScenarioDocument {
  ScenarioConfig config;
  std::optional<SweepSpec> sweep;

  bool operator==(const ScenarioDocument&) const = default;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Line-oriented "key = value" text; '#' starts a comment. `discipline` is
// required, every other key has a default. Throws ConfigError listing every
// problem found.
ScenarioDocument parse_document(std::string_view text);
ScenarioConfig parse_scenario(std::string_view text);

std::string emit_document(const ScenarioDocument& doc);
std::string emit_scenario(const ScenarioConfig& config);

// Single-key access used by overrides and sweeps. set_field throws
// ConfigError for unknown keys or malformed values; it does not validate
// cross-field invariants.
void set_field(ScenarioConfig& config, std::string_view key, std::string_view value);
std::string get_field(const ScenarioConfig& config, std::string_view key);
std::vector<std::string> field_names();

// Applies one sweep point to `base` (seed offset by `repetition`).
ScenarioConfig sweep_point_config(const ScenarioConfig& base, const SweepSpec& sweep,
                                  std::size_t point, std::uint32_t repetition);

}  // namespace aqmsim::harness
