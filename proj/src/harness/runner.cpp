#include "harness/runner.hpp"

#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "aqm/factory.hpp"
#include "sim/rng.hpp"
#include "sim/scheduler.hpp"
#include "traffic/cbr.hpp"
#include "traffic/sink.hpp"
#include "traffic/tcp.hpp"

namespace aqmsim::harness {

using sim::SimTime;

RunReport run_scenario(const ScenarioConfig& config) {
  if (auto problems = config.validate(); !problems.empty()) throw ConfigError(std::move(problems));

  sim::Scheduler scheduler;
  sim::Rng root(config.seed);
  auto discipline =
      aqm::make_discipline(config.discipline, config.buffer, root.derive(1), config.packet_size);

  const double end_s = config.duration_s;
  const double warmup_s = std::min(config.warmup_s, end_s);
  metrics::QueueMonitor monitor(config.ewma_weight, SimTime::from_seconds(config.sample_interval_s));
  metrics::FlowMeter meter(warmup_s, end_s);

  sim::DumbbellConfig topo;
  topo.access_bandwidth_bps = config.topology.access_bandwidth_bps;
  topo.access_delay = SimTime::from_seconds(config.topology.access_delay_s);
  topo.bottleneck_bandwidth_bps = config.topology.bottleneck_bandwidth_bps;
  topo.bottleneck_delay = SimTime::from_seconds(config.topology.bottleneck_delay_s);

  sim::Dumbbell::Observer observer;
  observer.on_drop = [&meter](const sim::Packet& p, SimTime now) { meter.on_drop(p, now); };
  observer.on_deliver = [&meter](const sim::Packet& p, SimTime now) { meter.on_deliver(p, now); };
  observer.on_queue_change = [&monitor](const aqm::QueueDiscipline& q, SimTime now) {
    monitor.record(now, {q.length(), q.class_length(sim::TrafficClass::tcp),
                         q.class_length(sim::TrafficClass::udp)});
  };
  sim::Dumbbell net(scheduler, topo, std::move(discipline), std::move(observer));
  traffic::Sink sink;

  std::vector<std::unique_ptr<traffic::CbrSource>> udp;
  std::vector<std::unique_ptr<traffic::TcpSource>> tcp;
  sim::FlowId next_id = 0;

  auto deliver = [&](const sim::Packet& pkt) {
    if (auto ack = sink.receive(pkt, scheduler.now())) net.send_ack(*ack);
  };

  for (std::uint32_t i = 0; i < config.udp.flows; ++i) {
    const sim::FlowId id = next_id++;
    meter.add_flow(id, sim::TrafficClass::udp);
    net.add_flow(id, deliver, [](const sim::Packet&) {});
    auto src = std::make_unique<traffic::CbrSource>(id, config.udp.rate_bps, config.packet_size,
                                                    SimTime::from_seconds(config.udp.start_s));
    src->attach(scheduler, [&net](const sim::Packet& p) { net.send_data(p); });
    udp.push_back(std::move(src));
  }

  traffic::TcpParams tcp_params;
  tcp_params.max_window = config.tcp.max_window;
  tcp_params.packet_size = config.packet_size;
  tcp_params.variant = config.tcp.variant;
  for (std::uint32_t i = 0; i < config.tcp.flows; ++i) {
    const sim::FlowId id = next_id++;
    meter.add_flow(id, sim::TrafficClass::tcp);
    auto src = std::make_unique<traffic::TcpSource>(
        id, tcp_params, scheduler, [&net](const sim::Packet& p) { net.send_data(p); });
    traffic::TcpSource* raw = src.get();
    net.add_flow(id, deliver, [raw](const sim::Packet& ack) { raw->on_ack(ack); });
    scheduler.schedule(SimTime::from_seconds(i * config.tcp.start_interval_s), [raw] { raw->start(); });
    tcp.push_back(std::move(src));
  }

  scheduler.run_until(SimTime::from_seconds(end_s));

  RunReport r;
  r.flows = meter.finish();
  r.queue_trace = monitor.trace();
  r.window_s = end_s - warmup_s;
  r.bottleneck_bps = config.topology.bottleneck_bandwidth_bps;
  r.buffer_packets = config.buffer.in_packets(config.packet_size);
  r.counters = net.counters();
  r.queued_at_end = net.discipline().length();
  r.sink_bytes = sink.total_bytes();
  r.events = scheduler.events_fired();
  r.trace_digest = scheduler.trace_digest();

  double tcp_bytes = 0;
  double udp_bytes = 0;
  std::vector<double> throughputs;
  for (const auto& f : r.flows) {
    (f.cls == sim::TrafficClass::tcp ? tcp_bytes : udp_bytes) += static_cast<double>(f.delivered_bytes);
    throughputs.push_back(f.throughput_bps);
  }
  const double total_bytes = tcp_bytes + udp_bytes;
  if (r.window_s > 0) {
    r.utilization = metrics::utilization(total_bytes * 8, r.bottleneck_bps, r.window_s);
    r.tcp_throughput_bps = tcp_bytes * 8 / r.window_s;
    r.udp_throughput_bps = udp_bytes * 8 / r.window_s;
  }
  if (total_bytes > 0) {
    r.tcp_share = tcp_bytes / total_bytes;
    r.udp_share = udp_bytes / total_bytes;
    r.jain_index = metrics::jain_index(throughputs);
  }
  r.mean_ewma_qlen = monitor.mean_ewma(warmup_s, end_s);
  r.mean_ewma_tcp = monitor.mean_ewma_tcp(warmup_s, end_s);
  r.mean_ewma_udp = monitor.mean_ewma_udp(warmup_s, end_s);
  return r;
}

std::vector<SweepAggregate> SweepResult::aggregates() const {
  std::vector<SweepAggregate> out;
  for (const auto& row : rows) {
    if (out.empty() || out.back().point != row.point) {
      out.emplace_back();
      out.back().point = row.point;
      out.back().label = row.label;
    }
    SweepAggregate& a = out.back();
    ++a.runs;
    a.utilization += row.report.utilization;
    a.jain_index += row.report.jain_index;
    a.tcp_share += row.report.tcp_share;
    a.udp_share += row.report.udp_share;
    a.tcp_throughput_bps += row.report.tcp_throughput_bps;
    a.udp_throughput_bps += row.report.udp_throughput_bps;
    a.mean_ewma_qlen += row.report.mean_ewma_qlen;
  }
  for (auto& a : out) {
    const double n = static_cast<double>(a.runs);
    a.utilization /= n;
    a.jain_index /= n;
    a.tcp_share /= n;
    a.udp_share /= n;
    a.tcp_throughput_bps /= n;
    a.udp_throughput_bps /= n;
    a.mean_ewma_qlen /= n;
  }
  return out;
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& sweep, unsigned jobs) {
  if (sweep.points.empty()) throw ConfigError({"sweep.values: at least one value required"});
  if (sweep.repetitions < 1) throw ConfigError({"sweep.repetitions: must be >= 1"});

  SweepResult result;
  result.spec = sweep;
  std::vector<ScenarioConfig> configs;
  for (std::size_t p = 0; p < sweep.points.size(); ++p) {
    for (std::uint32_t rep = 0; rep < sweep.repetitions; ++rep) {
      configs.push_back(sweep_point_config(base, sweep, p, rep));
      SweepRow row;
      row.point = p;
      row.label = sweep.label(p);
      row.seed = configs.back().seed;
      result.rows.push_back(std::move(row));
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        result.rows[i].report = run_scenario(configs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

}  // namespace aqmsim::harness
