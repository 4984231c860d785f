#pragma once

#include <filesystem>
#include <string>

#include "harness/runner.hpp"

namespace aqmsim::harness {

std::string flows_csv(const RunReport& report);
std::string queue_csv(const RunReport& report);
std::string summary_csv(const RunReport& report);
// Two-column (time_s, value) series of the EWMA queue: "total", "tcp" or "udp".
std::string ewma_series_csv(const RunReport& report, std::string_view which);

// flows.csv, queue.csv, summary.csv and series/ewma_{total,tcp,udp}.csv.
void write_run_csv(const RunReport& report, const std::filesystem::path& dir);

std::string sweep_csv(const SweepResult& result);
std::string sweep_flows_csv(const SweepResult& result);
std::string sweep_aggregate_csv(const SweepResult& result);

// sweep.csv, sweep_flows.csv, sweep_aggregate.csv, plus one run directory
// per row under runs/.
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& dir);

}  // namespace aqmsim::harness
