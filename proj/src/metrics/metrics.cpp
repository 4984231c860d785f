#include "metrics/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "aqm/red.hpp"

namespace aqmsim::metrics {

QueueCounts classify(const std::deque<sim::Packet>& contents) {
  QueueCounts c;
  for (const auto& pkt : contents) {
    ++c.total;
    if (pkt.cls == sim::TrafficClass::tcp)
      ++c.tcp;
    else
      ++c.udp;
  }
  return c;
}

QueueMonitor::QueueMonitor(double weight, SimTime sample_interval)
    : weight_(weight), interval_(sample_interval) {
  if (!(weight > 0 && weight < 1)) throw std::invalid_argument("QueueMonitor: weight in (0,1)");
}

void QueueMonitor::record(SimTime now, QueueCounts counts) {
  ewma_total_ = aqm::ewma_update(ewma_total_, static_cast<double>(counts.total), weight_);
  ewma_tcp_ = aqm::ewma_update(ewma_tcp_, static_cast<double>(counts.tcp), weight_);
  ewma_udp_ = aqm::ewma_update(ewma_udp_, static_cast<double>(counts.udp), weight_);
  ++updates_;
  if (now < next_sample_) return;
  trace_.push_back(QueueTraceSample{now.seconds(), counts.total, counts.tcp, counts.udp,
                                    ewma_total_, ewma_tcp_, ewma_udp_});
  next_sample_ = interval_ > SimTime{} ? now + interval_ : now;
}

namespace {

template <typename Field>
double mean_over(const std::vector<QueueTraceSample>& trace, double from, double to, Field f) {
  double sum = 0;
  std::size_t n = 0;
  for (const auto& s : trace) {
    if (s.time_s < from || s.time_s > to) continue;
    sum += f(s);
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

double QueueMonitor::mean_ewma(double from_s, double to_s) const {
  return mean_over(trace_, from_s, to_s, [](const auto& s) { return s.ewma_qlen; });
}
double QueueMonitor::mean_ewma_tcp(double from_s, double to_s) const {
  return mean_over(trace_, from_s, to_s, [](const auto& s) { return s.ewma_tcp; });
}
double QueueMonitor::mean_ewma_udp(double from_s, double to_s) const {
  return mean_over(trace_, from_s, to_s, [](const auto& s) { return s.ewma_udp; });
}

double jain_index(std::span<const double> throughputs) {
  if (throughputs.empty()) throw std::domain_error("jain_index: empty input");
  double sum = 0;
  double sum_sq = 0;
  for (double x : throughputs) {
    if (x < 0) throw std::domain_error("jain_index: negative throughput");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0) throw std::domain_error("jain_index: all throughputs are zero");
  return sum * sum / (static_cast<double>(throughputs.size()) * sum_sq);
}

double utilization(double delivered_bits, double bottleneck_bps, double duration_s) {
  if (!(duration_s > 0)) throw std::domain_error("utilization: duration must be > 0");
  if (!(bottleneck_bps > 0)) throw std::domain_error("utilization: bandwidth must be > 0");
  return delivered_bits / (bottleneck_bps * duration_s);
}

FlowMeter::FlowMeter(double window_start_s, double window_end_s)
    : window_start_(window_start_s), window_end_(window_end_s) {}

void FlowMeter::add_flow(sim::FlowId flow, sim::TrafficClass cls) {
  flow_index_.emplace_back(flow, flows_.size());
  FlowStats s;
  s.flow = flow;
  s.cls = cls;
  flows_.push_back(s);
}

FlowStats& FlowMeter::stats(sim::FlowId flow) {
  // Runs number flows 0..n-1 in registration order.
  if (flow < flows_.size() && flows_[flow].flow == flow) return flows_[flow];
  for (auto& [id, idx] : flow_index_)
    if (id == flow) return flows_[idx];
  throw std::out_of_range("FlowMeter: unknown flow");
}

bool FlowMeter::in_window(SimTime now) const {
  const double t = now.seconds();
  return t >= window_start_ && t <= window_end_;
}

void FlowMeter::on_deliver(const sim::Packet& pkt, SimTime now) {
  FlowStats& s = stats(pkt.flow);
  s.total_delivered_bytes += pkt.size_bytes;
  if (in_window(now)) s.delivered_bytes += pkt.size_bytes;
}

void FlowMeter::on_drop(const sim::Packet& pkt, SimTime now) {
  FlowStats& s = stats(pkt.flow);
  ++s.total_dropped_packets;
  if (in_window(now)) ++s.dropped_packets;
}

std::vector<FlowStats> FlowMeter::finish() const {
  std::vector<FlowStats> out = flows_;
  const double window = window_s();
  for (auto& s : out)
    s.throughput_bps = window > 0 ? static_cast<double>(s.delivered_bytes) * 8.0 / window : 0.0;
  return out;
}

}  // namespace aqmsim::metrics
