#include "harness/config.hpp"

#include <charconv>
#include <fmt/format.h>
#include <functional>
#include <map>
#include <set>

namespace aqmsim::harness {

namespace {

using sim::SimTime;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  return std::nullopt;
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

// A setter returns an empty string on success, otherwise the reason.
struct Field {
  std::string key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<std::string(ScenarioConfig&, std::string_view)> set;
};

template <typename Access>
Field real_field(std::string key, Access access) {
  return Field{
      key, [access](const ScenarioConfig& c) { return fmt_double(access(const_cast<ScenarioConfig&>(c))); },
      [access](ScenarioConfig& c, std::string_view v) -> std::string {
        auto d = to_double(v);
        if (!d) return fmt::format("expected a number, got '{}'", v);
        access(c) = *d;
        return {};
      }};
}

template <typename Access>
Field seconds_field(std::string key, Access access) {
  return Field{
      key,
      [access](const ScenarioConfig& c) {
        return fmt_double(access(const_cast<ScenarioConfig&>(c)).seconds());
      },
      [access](ScenarioConfig& c, std::string_view v) -> std::string {
        auto d = to_double(v);
        if (!d) return fmt::format("expected seconds, got '{}'", v);
        if (std::abs(*d) > 1e9) return "out of range";
        access(c) = SimTime::from_seconds(*d);
        return {};
      }};
}

template <typename T, typename Access>
Field uint_field(std::string key, Access access) {
  return Field{
      key, [access](const ScenarioConfig& c) { return fmt::format("{}", access(const_cast<ScenarioConfig&>(c))); },
      [access](ScenarioConfig& c, std::string_view v) -> std::string {
        auto u = to_uint(v);
        if (!u) return fmt::format("expected a non-negative integer, got '{}'", v);
        if (*u > std::numeric_limits<T>::max()) return "out of range";
        access(c) = static_cast<T>(*u);
        return {};
      }};
}

template <typename Access>
Field bool_field(std::string key, Access access) {
  return Field{
      key, [access](const ScenarioConfig& c) -> std::string { return access(const_cast<ScenarioConfig&>(c)) ? "true" : "false"; },
      [access](ScenarioConfig& c, std::string_view v) -> std::string {
        auto b = to_bool(v);
        if (!b) return fmt::format("expected true or false, got '{}'", v);
        access(c) = *b;
        return {};
      }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> t;
    t.push_back(Field{
        "discipline",
        [](const ScenarioConfig& c) { return std::string(aqm::to_string(c.discipline.kind)); },
        [](ScenarioConfig& c, std::string_view v) -> std::string {
          auto k = aqm::parse_discipline(v);
          if (!k) return fmt::format("unknown discipline '{}' (droptail, red, fred, blue, sfb, choke)", v);
          c.discipline.kind = *k;
          return {};
        }});
    t.push_back(real_field("duration_s", [](ScenarioConfig& c) -> double& { return c.duration_s; }));
    t.push_back(real_field("warmup_s", [](ScenarioConfig& c) -> double& { return c.warmup_s; }));
    t.push_back(uint_field<std::uint64_t>("seed", [](ScenarioConfig& c) -> std::uint64_t& { return c.seed; }));
    t.push_back(uint_field<std::uint32_t>("packet_size", [](ScenarioConfig& c) -> std::uint32_t& { return c.packet_size; }));

    t.push_back(real_field("topology.access_bandwidth_bps", [](ScenarioConfig& c) -> double& { return c.topology.access_bandwidth_bps; }));
    t.push_back(real_field("topology.access_delay_s", [](ScenarioConfig& c) -> double& { return c.topology.access_delay_s; }));
    t.push_back(real_field("topology.bottleneck_bandwidth_bps", [](ScenarioConfig& c) -> double& { return c.topology.bottleneck_bandwidth_bps; }));
    t.push_back(real_field("topology.bottleneck_delay_s", [](ScenarioConfig& c) -> double& { return c.topology.bottleneck_delay_s; }));

    t.push_back(uint_field<std::uint64_t>("buffer.capacity", [](ScenarioConfig& c) -> std::uint64_t& { return c.buffer.value; }));
    t.push_back(Field{
        "buffer.unit",
        [](const ScenarioConfig& c) -> std::string { return c.buffer.unit == aqm::Capacity::Unit::packets ? "packets" : "bytes"; },
        [](ScenarioConfig& c, std::string_view v) -> std::string {
          if (v == "packets") c.buffer.unit = aqm::Capacity::Unit::packets;
          else if (v == "bytes") c.buffer.unit = aqm::Capacity::Unit::bytes;
          else return fmt::format("expected packets or bytes, got '{}'", v);
          return {};
        }});

    t.push_back(uint_field<std::uint32_t>("tcp.flows", [](ScenarioConfig& c) -> std::uint32_t& { return c.tcp.flows; }));
    t.push_back(uint_field<std::uint32_t>("tcp.max_window", [](ScenarioConfig& c) -> std::uint32_t& { return c.tcp.max_window; }));
    t.push_back(Field{
        "tcp.variant",
        [](const ScenarioConfig& c) { return std::string(traffic::to_string(c.tcp.variant)); },
        [](ScenarioConfig& c, std::string_view v) -> std::string {
          auto var = traffic::parse_tcp_variant(v);
          if (!var) return fmt::format("expected reno or tahoe, got '{}'", v);
          c.tcp.variant = *var;
          return {};
        }});
    t.push_back(real_field("tcp.start_interval_s", [](ScenarioConfig& c) -> double& { return c.tcp.start_interval_s; }));

    t.push_back(uint_field<std::uint32_t>("udp.flows", [](ScenarioConfig& c) -> std::uint32_t& { return c.udp.flows; }));
    t.push_back(real_field("udp.rate_bps", [](ScenarioConfig& c) -> double& { return c.udp.rate_bps; }));
    t.push_back(real_field("udp.start_s", [](ScenarioConfig& c) -> double& { return c.udp.start_s; }));

    t.push_back(real_field("discipline.red.min_th", [](ScenarioConfig& c) -> double& { return c.discipline.red.min_th; }));
    t.push_back(real_field("discipline.red.max_th", [](ScenarioConfig& c) -> double& { return c.discipline.red.max_th; }));
    t.push_back(real_field("discipline.red.max_p", [](ScenarioConfig& c) -> double& { return c.discipline.red.max_p; }));
    t.push_back(real_field("discipline.red.w_q", [](ScenarioConfig& c) -> double& { return c.discipline.red.w_q; }));
    t.push_back(bool_field("discipline.red.count_spread", [](ScenarioConfig& c) -> bool& { return c.discipline.red.count_spread; }));

    t.push_back(real_field("discipline.fred.min_q", [](ScenarioConfig& c) -> double& { return c.discipline.fred_min_q; }));
    t.push_back(bool_field("discipline.fred.two_packet_mode", [](ScenarioConfig& c) -> bool& { return c.discipline.fred_two_packet_mode; }));
    t.push_back(real_field("discipline.fred.two_packet_threshold", [](ScenarioConfig& c) -> double& { return c.discipline.fred_two_packet_threshold; }));

    t.push_back(real_field("discipline.blue.d1", [](ScenarioConfig& c) -> double& { return c.discipline.blue.d1; }));
    t.push_back(real_field("discipline.blue.d2", [](ScenarioConfig& c) -> double& { return c.discipline.blue.d2; }));
    t.push_back(seconds_field("discipline.blue.freeze_time", [](ScenarioConfig& c) -> SimTime& { return c.discipline.blue.freeze_time; }));

    t.push_back(uint_field<std::uint32_t>("discipline.sfb.levels", [](ScenarioConfig& c) -> std::uint32_t& { return c.discipline.sfb.levels; }));
    t.push_back(uint_field<std::uint32_t>("discipline.sfb.bins", [](ScenarioConfig& c) -> std::uint32_t& { return c.discipline.sfb.bins; }));
    t.push_back(real_field("discipline.sfb.d1", [](ScenarioConfig& c) -> double& { return c.discipline.sfb.d1; }));
    t.push_back(real_field("discipline.sfb.d2", [](ScenarioConfig& c) -> double& { return c.discipline.sfb.d2; }));
    t.push_back(seconds_field("discipline.sfb.freeze_time", [](ScenarioConfig& c) -> SimTime& { return c.discipline.sfb.freeze_time; }));
    t.push_back(real_field("discipline.sfb.bin_size_factor", [](ScenarioConfig& c) -> double& { return c.discipline.sfb.bin_size_factor; }));
    t.push_back(seconds_field("discipline.sfb.boxtime", [](ScenarioConfig& c) -> SimTime& { return c.discipline.sfb.boxtime; }));
    t.push_back(real_field("discipline.sfb.boxtime_jitter", [](ScenarioConfig& c) -> double& { return c.discipline.sfb.boxtime_jitter; }));
    t.push_back(seconds_field("discipline.sfb.h_interval", [](ScenarioConfig& c) -> SimTime& { return c.discipline.sfb.h_interval; }));

    t.push_back(bool_field("discipline.choke.adaptive", [](ScenarioConfig& c) -> bool& { return c.discipline.choke_adaptive; }));
    t.push_back(uint_field<std::uint32_t>("discipline.choke.cand_num", [](ScenarioConfig& c) -> std::uint32_t& { return c.discipline.choke_cand_num; }));
    t.push_back(uint_field<std::uint32_t>("discipline.choke.interval_num", [](ScenarioConfig& c) -> std::uint32_t& { return c.discipline.choke_interval_num; }));

    t.push_back(real_field("metrics.ewma_weight", [](ScenarioConfig& c) -> double& { return c.ewma_weight; }));
    t.push_back(real_field("metrics.sample_interval_s", [](ScenarioConfig& c) -> double& { return c.sample_interval_s; }));
    t.push_back(Field{
        "output.dir", [](const ScenarioConfig& c) { return c.out_dir; },
        [](ScenarioConfig& c, std::string_view v) -> std::string {
          c.out_dir = std::string(v);
          return {};
        }});
    return t;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (f.key == key) return &f;
  return nullptr;
}

bool is_sweep_key(std::string_view key) {
  return key == "sweep.parameter" || key == "sweep.values" || key == "sweep.repetitions";
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string summarize(const std::vector<std::string>& problems) {
  if (problems.size() == 1) return "invalid scenario: " + problems.front();
  return fmt::format("invalid scenario ({} problems): {}", problems.size(), join(problems, "; "));
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(summarize(problems)), problems_(std::move(problems)) {}

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> e;
  if (!(topology.access_bandwidth_bps > 0)) e.emplace_back("topology.access_bandwidth_bps: must be > 0");
  if (!(topology.access_delay_s >= 0)) e.emplace_back("topology.access_delay_s: must be >= 0");
  if (!(topology.bottleneck_bandwidth_bps > 0)) e.emplace_back("topology.bottleneck_bandwidth_bps: must be > 0");
  if (!(topology.bottleneck_delay_s >= 0)) e.emplace_back("topology.bottleneck_delay_s: must be >= 0");
  if (packet_size == 0) e.emplace_back("packet_size: must be > 0");
  if (buffer.value == 0) e.emplace_back("buffer.capacity: must be > 0");
  if (buffer.unit == aqm::Capacity::Unit::bytes && buffer.value < packet_size)
    e.emplace_back("buffer.capacity: a bytes-mode buffer must hold at least one packet");
  if (tcp.flows + udp.flows == 0) e.emplace_back("tcp.flows: at least one flow is required");
  if (tcp.max_window < 1) e.emplace_back("tcp.max_window: must be >= 1");
  if (!(tcp.start_interval_s >= 0)) e.emplace_back("tcp.start_interval_s: must be >= 0");
  if (udp.flows > 0) {
    if (!(udp.rate_bps > 0)) e.emplace_back("udp.rate_bps: must be > 0");
    if (udp.rate_bps > topology.access_bandwidth_bps)
      e.emplace_back("udp.rate_bps: must not exceed topology.access_bandwidth_bps");
  }
  if (!(udp.start_s >= 0)) e.emplace_back("udp.start_s: must be >= 0");
  if (!(duration_s >= 0)) e.emplace_back("duration_s: must be >= 0");
  if (!(warmup_s >= 0)) e.emplace_back("warmup_s: must be >= 0");
  if (duration_s > 0 && !(warmup_s < duration_s)) e.emplace_back("warmup_s: warmup_s < duration_s required");
  if (!(ewma_weight > 0 && ewma_weight < 1)) e.emplace_back("metrics.ewma_weight: must lie in (0, 1)");
  if (!(sample_interval_s > 0)) e.emplace_back("metrics.sample_interval_s: must be > 0");
  discipline.validate(buffer, packet_size == 0 ? 1 : packet_size, e);
  return e;
}

std::string SweepSpec::label(std::size_t point) const {
  return join(points.at(point), ":");
}

void set_field(ScenarioConfig& config, std::string_view key, std::string_view value) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError({fmt::format("{}: unknown key", key)});
  if (auto reason = f->set(config, trim(value)); !reason.empty())
    throw ConfigError({fmt::format("{}: {}", key, reason)});
}

std::string get_field(const ScenarioConfig& config, std::string_view key) {
  const Field* f = find_field(key);
  if (!f) throw ConfigError({fmt::format("{}: unknown key", key)});
  return f->get(config);
}

std::vector<std::string> field_names() {
  std::vector<std::string> names;
  for (const auto& f : fields()) names.push_back(f.key);
  return names;
}

ScenarioConfig sweep_point_config(const ScenarioConfig& base, const SweepSpec& sweep,
                                  std::size_t point, std::uint32_t repetition) {
  ScenarioConfig cfg = base;
  const auto& values = sweep.points.at(point);
  for (std::size_t i = 0; i < sweep.parameters.size(); ++i)
    set_field(cfg, sweep.parameters[i], values.at(i));
  cfg.seed = base.seed + repetition;
  return cfg;
}

ScenarioDocument parse_document(std::string_view text) {
  ScenarioDocument doc;
  std::vector<std::string> problems;
  std::set<std::string, std::less<>> seen;
  std::map<std::string, std::pair<std::size_t, std::string>, std::less<>> sweep_lines;

  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(fmt::format("line {}: expected 'key = value'", line_no));
      continue;
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      problems.push_back(fmt::format("line {}: {}: duplicate key", line_no, key));
      continue;
    }
    if (is_sweep_key(key)) {
      sweep_lines[std::string(key)] = {line_no, std::string(value)};
      continue;
    }
    const Field* f = find_field(key);
    if (!f) {
      problems.push_back(fmt::format("line {}: {}: unknown key", line_no, key));
      continue;
    }
    if (auto reason = f->set(doc.config, value); !reason.empty())
      problems.push_back(fmt::format("line {}: {}: {}", line_no, key, reason));
  }
  if (!seen.contains("discipline")) problems.emplace_back("discipline: required key missing");

  if (!sweep_lines.empty()) {
    SweepSpec sweep;
    auto param = sweep_lines.find("sweep.parameter");
    auto values = sweep_lines.find("sweep.values");
    if (param == sweep_lines.end()) problems.emplace_back("sweep.parameter: required when any sweep key is set");
    if (values == sweep_lines.end()) problems.emplace_back("sweep.values: required when any sweep key is set");
    if (auto reps = sweep_lines.find("sweep.repetitions"); reps != sweep_lines.end()) {
      auto n = to_uint(reps->second.second);
      if (!n || *n < 1 || *n > 10000)
        problems.push_back(fmt::format("line {}: sweep.repetitions: expected an integer in [1, 10000]",
                                       reps->second.first));
      else
        sweep.repetitions = static_cast<std::uint32_t>(*n);
    }
    if (param != sweep_lines.end()) {
      for (auto p : split(param->second.second, ':')) {
        if (!find_field(p))
          problems.push_back(fmt::format("line {}: sweep.parameter: unknown key '{}'", param->second.first, p));
        sweep.parameters.emplace_back(p);
      }
    }
    if (values != sweep_lines.end()) {
      for (auto v : split(values->second.second, ',')) {
        std::vector<std::string> point;
        for (auto part : split(v, ':')) point.emplace_back(part);
        if (point.size() != sweep.parameters.size() && !sweep.parameters.empty()) {
          problems.push_back(fmt::format("line {}: sweep.values: '{}' has {} component(s), expected {}",
                                         values->second.first, v, point.size(), sweep.parameters.size()));
          continue;
        }
        sweep.points.push_back(std::move(point));
      }
      if (sweep.points.empty()) problems.emplace_back("sweep.values: at least one value required");
    }
    doc.sweep = std::move(sweep);
  }

  if (problems.empty()) {
    for (auto& p : doc.config.validate()) problems.push_back(std::move(p));
    if (doc.sweep) {
      for (std::size_t i = 0; i < doc.sweep->points.size() && problems.empty(); ++i) {
        try {
          ScenarioConfig point = sweep_point_config(doc.config, *doc.sweep, i, 0);
          for (auto& p : point.validate())
            problems.push_back(fmt::format("sweep point '{}': {}", doc.sweep->label(i), p));
        } catch (const ConfigError& e) {
          for (const auto& p : e.problems())
            problems.push_back(fmt::format("sweep point '{}': {}", doc.sweep->label(i), p));
        }
      }
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return doc;
}

ScenarioConfig parse_scenario(std::string_view text) { return parse_document(text).config; }

std::string emit_scenario(const ScenarioConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    const std::string value = f.get(config);
    if (f.key == "output.dir" && value.empty()) continue;
    out += fmt::format("{} = {}\n", f.key, value);
  }
  return out;
}

std::string emit_document(const ScenarioDocument& doc) {
  std::string out = emit_scenario(doc.config);
  if (doc.sweep) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < doc.sweep->points.size(); ++i) labels.push_back(doc.sweep->label(i));
    out += fmt::format("sweep.parameter = {}\n", join(doc.sweep->parameters, ":"));
    out += fmt::format("sweep.values = {}\n", join(labels, ", "));
    out += fmt::format("sweep.repetitions = {}\n", doc.sweep->repetitions);
  }
  return out;
}

}  // namespace aqmsim::harness
