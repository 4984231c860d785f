#include "harness/csv.hpp"

#include <fmt/format.h>
#include <fstream>
#include <stdexcept>

namespace aqmsim::harness {

namespace {

std::string_view kind_name(sim::TrafficClass cls) {
  return cls == sim::TrafficClass::tcp ? "tcp" : "udp";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write to {} failed", path.string()));
}

void make_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

// Sweep labels may hold any config value; quote when needed.
std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string flows_csv(const RunReport& report) {
  std::string out = "flow_id,kind,delivered_bytes,dropped_packets,throughput_bps\n";
  for (const auto& f : report.flows)
    out += fmt::format("{},{},{},{},{:.3f}\n", f.flow, kind_name(f.cls), f.delivered_bytes,
                       f.dropped_packets, f.throughput_bps);
  return out;
}

std::string queue_csv(const RunReport& report) {
  std::string out = "time_s,total_qlen,tcp_qlen,udp_qlen,ewma_qlen\n";
  for (const auto& s : report.queue_trace)
    out += fmt::format("{:.3f},{},{},{},{:.6f}\n", s.time_s, s.total_qlen, s.tcp_qlen, s.udp_qlen,
                       s.ewma_qlen);
  return out;
}

std::string summary_csv(const RunReport& report) {
  return fmt::format("utilization,jain_index,tcp_share,udp_share\n{:.6f},{:.6f},{:.6f},{:.6f}\n",
                     report.utilization, report.jain_index, report.tcp_share, report.udp_share);
}

std::string ewma_series_csv(const RunReport& report, std::string_view which) {
  std::string out = fmt::format("time_s,ewma_{}\n", which);
  for (const auto& s : report.queue_trace) {
    double v = s.ewma_qlen;
    if (which == "tcp") v = s.ewma_tcp;
    else if (which == "udp") v = s.ewma_udp;
    else if (which != "total") throw std::invalid_argument(fmt::format("unknown series '{}'", which));
    out += fmt::format("{:.3f},{:.6f}\n", s.time_s, v);
  }
  return out;
}

void write_run_csv(const RunReport& report, const std::filesystem::path& dir) {
  make_dirs(dir / "series");
  write_file(dir / "flows.csv", flows_csv(report));
  write_file(dir / "queue.csv", queue_csv(report));
  write_file(dir / "summary.csv", summary_csv(report));
  for (std::string_view which : {"total", "tcp", "udp"})
    write_file(dir / "series" / fmt::format("ewma_{}.csv", which), ewma_series_csv(report, which));
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "point,value,seed,utilization,jain_index,tcp_share,udp_share,tcp_throughput_bps,"
      "udp_throughput_bps,mean_ewma_qlen\n";
  for (const auto& row : result.rows) {
    const auto& r = row.report;
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.3f},{:.3f},{:.6f}\n", row.point,
                       csv_field(row.label), row.seed, r.utilization, r.jain_index, r.tcp_share,
                       r.udp_share, r.tcp_throughput_bps, r.udp_throughput_bps, r.mean_ewma_qlen);
  }
  return out;
}

std::string sweep_flows_csv(const SweepResult& result) {
  std::string out = "point,value,seed,flow_id,kind,delivered_bytes,dropped_packets,throughput_bps\n";
  for (const auto& row : result.rows)
    for (const auto& f : row.report.flows)
      out += fmt::format("{},{},{},{},{},{},{},{:.3f}\n", row.point, csv_field(row.label), row.seed,
                         f.flow, kind_name(f.cls), f.delivered_bytes, f.dropped_packets,
                         f.throughput_bps);
  return out;
}

std::string sweep_aggregate_csv(const SweepResult& result) {
  std::string out =
      "point,value,runs,utilization,jain_index,tcp_share,udp_share,tcp_throughput_bps,"
      "udp_throughput_bps,mean_ewma_qlen\n";
  for (const auto& a : result.aggregates())
    out += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.3f},{:.3f},{:.6f}\n", a.point,
                       csv_field(a.label), a.runs, a.utilization, a.jain_index, a.tcp_share,
                       a.udp_share, a.tcp_throughput_bps, a.udp_throughput_bps, a.mean_ewma_qlen);
  return out;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& dir) {
  make_dirs(dir);
  write_file(dir / "sweep.csv", sweep_csv(result));
  write_file(dir / "sweep_flows.csv", sweep_flows_csv(result));
  write_file(dir / "sweep_aggregate.csv", sweep_aggregate_csv(result));
  for (const auto& row : result.rows)
    write_run_csv(row.report, dir / "runs" / fmt::format("p{}_s{}", row.point, row.seed));
}

}  // namespace aqmsim::harness
