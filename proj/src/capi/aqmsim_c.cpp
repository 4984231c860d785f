#include "aqmsim/aqmsim.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "harness/config.hpp"
#include "harness/csv.hpp"
#include "harness/presets.hpp"
#include "harness/runner.hpp"

using namespace aqmsim;

struct aqmsim_scenario {
  harness::ScenarioDocument doc;
};

struct aqmsim_report {
  harness::RunReport report;
};

struct aqmsim_sweep {
  harness::SweepResult result;
  std::vector<aqmsim_report> reports;
};

namespace {

thread_local std::string last_error;

aqmsim_status fail(aqmsim_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps exceptions escaping the core onto status codes.
template <typename F>
aqmsim_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const harness::ConfigError& e) {
    return fail(AQMSIM_E_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(AQMSIM_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AQMSIM_E_INTERNAL, e.what());
  }
}

// Syntax and unknown-key problems come first in a ConfigError's list and
// carry a "line N:" prefix or "unknown key".
aqmsim_status classify(const harness::ConfigError& e) {
  for (const auto& p : e.problems())
    if (p.rfind("line ", 0) == 0 || p.find("unknown key") != std::string::npos ||
        p.find("required key missing") != std::string::npos)
      return AQMSIM_E_PARSE;
  return AQMSIM_E_VALIDATION;
}

aqmsim_status parse_into(std::string_view text, aqmsim_scenario** out) {
  try {
    auto doc = harness::parse_document(text);
    *out = new aqmsim_scenario{std::move(doc)};
    return AQMSIM_OK;
  } catch (const harness::ConfigError& e) {
    return fail(classify(e), e.what());
  }
}

}  // namespace

extern "C" {

const char* aqmsim_version(void) { return "0.1.0"; }

const char* aqmsim_last_error(void) { return last_error.c_str(); }

const char* aqmsim_status_name(aqmsim_status status) {
  switch (status) {
    case AQMSIM_OK: return "ok";
    case AQMSIM_E_INVALID_ARG: return "invalid argument";
    case AQMSIM_E_PARSE: return "parse error";
    case AQMSIM_E_VALIDATION: return "validation error";
    case AQMSIM_E_UNKNOWN_PRESET: return "unknown preset";
    case AQMSIM_E_IO: return "i/o error";
    case AQMSIM_E_NO_SWEEP: return "no sweep";
    case AQMSIM_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

aqmsim_status aqmsim_scenario_parse(const char* text, aqmsim_scenario** out) {
  if (!text || !out) return fail(AQMSIM_E_INVALID_ARG, "text and out must be non-null");
  *out = nullptr;
  return guarded([&] { return parse_into(text, out); });
}

aqmsim_status aqmsim_scenario_load(const char* path, aqmsim_scenario** out) {
  if (!path || !out) return fail(AQMSIM_E_INVALID_ARG, "path and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(AQMSIM_E_IO, std::string("cannot read ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_into(text.str(), out);
  });
}

aqmsim_status aqmsim_scenario_from_preset(const char* name, aqmsim_scenario** out) {
  if (!name || !out) return fail(AQMSIM_E_INVALID_ARG, "name and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    try {
      *out = new aqmsim_scenario{harness::preset(name)};
      return AQMSIM_OK;
    } catch (const harness::ConfigError& e) {
      return fail(AQMSIM_E_UNKNOWN_PRESET, e.what());
    }
  });
}

aqmsim_status aqmsim_scenario_set(aqmsim_scenario* scenario, const char* key, const char* value) {
  if (!scenario || !key || !value) return fail(AQMSIM_E_INVALID_ARG, "arguments must be non-null");
  return guarded([&] {
    harness::ScenarioConfig updated = scenario->doc.config;
    try {
      harness::set_field(updated, key, value);
    } catch (const harness::ConfigError& e) {
      return fail(classify(e), e.what());
    }
    if (auto problems = updated.validate(); !problems.empty())
      return fail(AQMSIM_E_VALIDATION, harness::ConfigError(std::move(problems)).what());
    scenario->doc.config = std::move(updated);
    return AQMSIM_OK;
  });
}

aqmsim_status aqmsim_scenario_emit(const aqmsim_scenario* scenario, char* buf, size_t cap,
                                   size_t* needed) {
  if (!scenario) return fail(AQMSIM_E_INVALID_ARG, "scenario must be non-null");
  if (!buf && cap > 0) return fail(AQMSIM_E_INVALID_ARG, "buf is null but cap > 0");
  return guarded([&] {
    const std::string text = harness::emit_document(scenario->doc);
    if (needed) *needed = text.size() + 1;
    if (cap > 0) {
      const size_t n = std::min(cap - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
    return AQMSIM_OK;
  });
}

int aqmsim_scenario_is_sweep(const aqmsim_scenario* scenario) {
  return scenario && scenario->doc.sweep.has_value() ? 1 : 0;
}

void aqmsim_scenario_free(aqmsim_scenario* scenario) { delete scenario; }

size_t aqmsim_preset_count(void) { return harness::preset_names().size(); }

const char* aqmsim_preset_name(size_t index) {
  static const std::vector<std::string> names = harness::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

aqmsim_status aqmsim_run(const aqmsim_scenario* scenario, aqmsim_report** out) {
  if (!scenario || !out) return fail(AQMSIM_E_INVALID_ARG, "scenario and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    *out = new aqmsim_report{harness::run_scenario(scenario->doc.config)};
    return AQMSIM_OK;
  });
}

aqmsim_status aqmsim_report_summary(const aqmsim_report* report, aqmsim_summary* out) {
  if (!report || !out) return fail(AQMSIM_E_INVALID_ARG, "report and out must be non-null");
  const auto& r = report->report;
  *out = aqmsim_summary{r.utilization,     r.jain_index,    r.tcp_share,
                        r.udp_share,       r.tcp_throughput_bps, r.udp_throughput_bps,
                        r.mean_ewma_qlen,  r.mean_ewma_tcp, r.mean_ewma_udp,
                        r.buffer_packets,  r.window_s};
  last_error.clear();
  return AQMSIM_OK;
}

size_t aqmsim_report_flow_count(const aqmsim_report* report) {
  return report ? report->report.flows.size() : 0;
}

aqmsim_status aqmsim_report_flow(const aqmsim_report* report, size_t index, aqmsim_flow_stats* out) {
  if (!report || !out) return fail(AQMSIM_E_INVALID_ARG, "report and out must be non-null");
  if (index >= report->report.flows.size())
    return fail(AQMSIM_E_INVALID_ARG, "flow index out of range");
  const auto& f = report->report.flows[index];
  *out = aqmsim_flow_stats{f.flow,
                           f.cls == sim::TrafficClass::tcp ? AQMSIM_FLOW_TCP : AQMSIM_FLOW_UDP,
                           f.delivered_bytes, f.dropped_packets, f.throughput_bps};
  last_error.clear();
  return AQMSIM_OK;
}

aqmsim_status aqmsim_report_write_csv(const aqmsim_report* report, const char* dir) {
  if (!report || !dir) return fail(AQMSIM_E_INVALID_ARG, "report and dir must be non-null");
  return guarded([&] {
    try {
      harness::write_run_csv(report->report, dir);
    } catch (const std::runtime_error& e) {
      return fail(AQMSIM_E_IO, e.what());
    }
    return AQMSIM_OK;
  });
}

void aqmsim_report_free(aqmsim_report* report) { delete report; }

aqmsim_status aqmsim_sweep_run(const aqmsim_scenario* scenario, unsigned jobs, aqmsim_sweep** out) {
  if (!scenario || !out) return fail(AQMSIM_E_INVALID_ARG, "scenario and out must be non-null");
  *out = nullptr;
  if (!scenario->doc.sweep) return fail(AQMSIM_E_NO_SWEEP, "scenario has no sweep block");
  return guarded([&] {
    auto* s = new aqmsim_sweep{harness::run_sweep(scenario->doc.config, *scenario->doc.sweep, jobs), {}};
    for (auto& row : s->result.rows) s->reports.push_back(aqmsim_report{row.report});
    *out = s;
    return AQMSIM_OK;
  });
}

size_t aqmsim_sweep_row_count(const aqmsim_sweep* sweep) { return sweep ? sweep->result.rows.size() : 0; }

const char* aqmsim_sweep_row_label(const aqmsim_sweep* sweep, size_t row) {
  if (!sweep || row >= sweep->result.rows.size()) return nullptr;
  return sweep->result.rows[row].label.c_str();
}

uint64_t aqmsim_sweep_row_seed(const aqmsim_sweep* sweep, size_t row) {
  if (!sweep || row >= sweep->result.rows.size()) return 0;
  return sweep->result.rows[row].seed;
}

const aqmsim_report* aqmsim_sweep_row_report(const aqmsim_sweep* sweep, size_t row) {
  if (!sweep || row >= sweep->reports.size()) return nullptr;
  return &sweep->reports[row];
}

aqmsim_status aqmsim_sweep_write_csv(const aqmsim_sweep* sweep, const char* dir) {
  if (!sweep || !dir) return fail(AQMSIM_E_INVALID_ARG, "sweep and dir must be non-null");
  return guarded([&] {
    try {
      harness::write_sweep_csv(sweep->result, dir);
    } catch (const std::runtime_error& e) {
      return fail(AQMSIM_E_IO, e.what());
    }
    return AQMSIM_OK;
  });
}

void aqmsim_sweep_free(aqmsim_sweep* sweep) { delete sweep; }

}  // extern "C"
