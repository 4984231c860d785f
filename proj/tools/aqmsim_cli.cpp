// aqmsim command-line front end; talks to the simulator only through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aqmsim/aqmsim.h"

namespace {

struct ScenarioDeleter {
  void operator()(aqmsim_scenario* s) const { aqmsim_scenario_free(s); }
};
struct ReportDeleter {
  void operator()(aqmsim_report* r) const { aqmsim_report_free(r); }
};
struct SweepDeleter {
  void operator()(aqmsim_sweep* s) const { aqmsim_sweep_free(s); }
};
using ScenarioPtr = std::unique_ptr<aqmsim_scenario, ScenarioDeleter>;
using ReportPtr = std::unique_ptr<aqmsim_report, ReportDeleter>;
using SweepPtr = std::unique_ptr<aqmsim_sweep, SweepDeleter>;

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out_dir;
  unsigned jobs = 1;
  std::vector<std::string> overrides;  // key=value
};

// Exit codes: 1 bad input, 2 runtime failure.
int report_error(aqmsim_status status, const char* what) {
  std::fprintf(stderr, "aqmsim: %s: %s\n", what, aqmsim_last_error());
  return status == AQMSIM_E_IO || status == AQMSIM_E_INTERNAL ? 2 : 1;
}

std::string repr(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Returns 0 or an exit code.
int apply_flags(aqmsim_scenario* s, const CommonFlags& flags) {
  std::vector<std::pair<std::string, std::string>> sets;
  if (flags.seed) sets.emplace_back("seed", std::to_string(*flags.seed));
  if (flags.duration) {
    sets.emplace_back("duration_s", repr(*flags.duration));
  }
  for (const auto& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "aqmsim: --set expects key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [key, value] : sets) {
    aqmsim_status st = aqmsim_scenario_set(s, key.c_str(), value.c_str());
    // A shortened run may leave warmup beyond the end; scale it down to 10%.
    if (st == AQMSIM_E_VALIDATION && key == "duration_s")
      if (aqmsim_scenario_set(s, "warmup_s", repr(*flags.duration * 0.1).c_str()) == AQMSIM_OK)
        st = aqmsim_scenario_set(s, key.c_str(), value.c_str());
    if (st != AQMSIM_OK) return report_error(st, ("cannot apply " + key).c_str());
  }
  return 0;
}

std::string resolve_out_dir(const aqmsim_scenario* s, const CommonFlags& flags) {
  if (!flags.out_dir.empty()) return flags.out_dir;
  size_t needed = 0;
  aqmsim_scenario_emit(s, nullptr, 0, &needed);
  std::string text(needed, '\0');
  aqmsim_scenario_emit(s, text.data(), text.size(), &needed);
  const std::string key = "output.dir = ";
  if (auto pos = text.find(key); pos != std::string::npos) {
    const auto end = text.find('\n', pos);
    return text.substr(pos + key.size(), end - pos - key.size());
  }
  return "out";
}

void print_summary(const char* label, const aqmsim_report* report) {
  aqmsim_summary s{};
  aqmsim_report_summary(report, &s);
  std::printf("%-16s utilization=%.4f jain=%.4f tcp_share=%.4f udp_share=%.4f ewma_qlen=%.2f\n",
              label, s.utilization, s.jain_index, s.tcp_share, s.udp_share, s.mean_ewma_qlen);
}

int do_run(aqmsim_scenario* s, const CommonFlags& flags) {
  if (int rc = apply_flags(s, flags)) return rc;
  aqmsim_report* raw = nullptr;
  if (auto st = aqmsim_run(s, &raw); st != AQMSIM_OK) return report_error(st, "run failed");
  ReportPtr report(raw);
  const std::string dir = resolve_out_dir(s, flags);
  if (auto st = aqmsim_report_write_csv(report.get(), dir.c_str()); st != AQMSIM_OK)
    return report_error(st, "cannot write results");
  print_summary("run", report.get());
  std::printf("wrote %s\n", dir.c_str());
  return 0;
}

int do_sweep(aqmsim_scenario* s, const CommonFlags& flags) {
  if (int rc = apply_flags(s, flags)) return rc;
  aqmsim_sweep* raw = nullptr;
  if (auto st = aqmsim_sweep_run(s, flags.jobs, &raw); st != AQMSIM_OK)
    return report_error(st, "sweep failed");
  SweepPtr sweep(raw);
  const std::string dir = resolve_out_dir(s, flags);
  if (auto st = aqmsim_sweep_write_csv(sweep.get(), dir.c_str()); st != AQMSIM_OK)
    return report_error(st, "cannot write results");
  for (size_t i = 0; i < aqmsim_sweep_row_count(sweep.get()); ++i)
    print_summary(aqmsim_sweep_row_label(sweep.get(), i), aqmsim_sweep_row_report(sweep.get(), i));
  std::printf("wrote %s\n", dir.c_str());
  return 0;
}

ScenarioPtr load(const std::string& path, int& rc) {
  aqmsim_scenario* raw = nullptr;
  if (auto st = aqmsim_scenario_load(path.c_str(), &raw); st != AQMSIM_OK) {
    rc = report_error(st, path.c_str());
    return nullptr;
  }
  return ScenarioPtr(raw);
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Override the random seed");
  cmd->add_option("--duration", flags.duration, "Override duration_s (simulated seconds)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out-dir", flags.out_dir, "Directory for CSV output (default: output.dir or ./out)");
  cmd->add_option("--set", flags.overrides, "Override any config key, as key=value")
      ->type_name("KEY=VALUE");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event dumbbell simulator for active queue management"};
  app.require_subcommand(1);
  app.set_version_flag("--version", aqmsim_version());

  CommonFlags flags;
  std::string config_path;
  std::string preset_name;
  bool emit_config = false;

  auto* run = app.add_subcommand("run", "Run a single scenario");
  run->add_option("config", config_path, "Scenario file")->required();
  add_common(run, flags);

  auto* sweep = app.add_subcommand("sweep", "Run every point of a sweep");
  sweep->add_option("config", config_path, "Scenario file with sweep.* keys")->required();
  sweep->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(sweep, flags);

  auto* preset = app.add_subcommand("preset", "Run a named experiment, or print its config");
  preset->add_option("name", preset_name, "Preset name (see `presets`)")->required();
  preset->add_flag("--emit-config", emit_config, "Print the preset as a config file and exit");
  preset->add_option("--jobs", flags.jobs, "Worker threads for sweep presets")
      ->check(CLI::PositiveNumber);
  add_common(preset, flags);

  auto* presets = app.add_subcommand("presets", "List preset names");

  CLI11_PARSE(app, argc, argv);

  int rc = 0;
  if (*presets) {
    for (size_t i = 0; i < aqmsim_preset_count(); ++i) std::puts(aqmsim_preset_name(i));
    return 0;
  }
  if (*run) {
    auto s = load(config_path, rc);
    return s ? do_run(s.get(), flags) : rc;
  }
  if (*sweep) {
    auto s = load(config_path, rc);
    if (!s) return rc;
    if (!aqmsim_scenario_is_sweep(s.get())) {
      std::fprintf(stderr, "aqmsim: %s has no sweep.parameter/sweep.values\n", config_path.c_str());
      return 1;
    }
    return do_sweep(s.get(), flags);
  }

  aqmsim_scenario* raw = nullptr;
  if (auto st = aqmsim_scenario_from_preset(preset_name.c_str(), &raw); st != AQMSIM_OK)
    return report_error(st, "preset");
  ScenarioPtr s(raw);
  if (emit_config) {
    if (int code = apply_flags(s.get(), flags)) return code;
    size_t needed = 0;
    aqmsim_scenario_emit(s.get(), nullptr, 0, &needed);
    std::string text(needed, '\0');
    aqmsim_scenario_emit(s.get(), text.data(), text.size(), &needed);
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  return aqmsim_scenario_is_sweep(s.get()) ? do_sweep(s.get(), flags) : do_run(s.get(), flags);
}
