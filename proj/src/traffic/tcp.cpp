#include "traffic/tcp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aqmsim::traffic {

std::string_view to_string(TcpVariant v) { return v == TcpVariant::reno ? "reno" : "tahoe"; }

std::optional<TcpVariant> parse_tcp_variant(std::string_view name) {
  if (name == "reno") return TcpVariant::reno;
  if (name == "tahoe") return TcpVariant::tahoe;
  return std::nullopt;
}

void CongestionWindow::on_new_ack() {
  dup_acks = 0;
  if (in_recovery) {
    in_recovery = false;
    cwnd = ssthresh;
    return;
  }
  if (cwnd < ssthresh)
    cwnd += 1.0;
  else
    cwnd += 1.0 / cwnd;
}

bool CongestionWindow::on_duplicate_ack() {
  ++dup_acks;
  if (in_recovery) {
    cwnd += 1.0;  // each further dup ack means a segment has left the network
    return false;
  }
  if (dup_acks != 3) return false;
  ssthresh = std::max(cwnd / 2.0, 2.0);
  if (variant == TcpVariant::reno) {
    cwnd = ssthresh;
    in_recovery = true;
  } else {
    cwnd = 1.0;
  }
  return true;
}

void CongestionWindow::on_timeout() {
  ssthresh = std::max(cwnd / 2.0, 2.0);
  cwnd = 1.0;
  dup_acks = 0;
  in_recovery = false;
}

void RetransmitTimer::on_rtt_sample(SimTime rtt) {
  const double r = rtt.seconds();
  if (!has_sample) {
    srtt = r;
    rttvar = r / 2.0;
    has_sample = true;
  } else {
    rttvar = 0.75 * rttvar + 0.25 * std::abs(srtt - r);
    srtt = 0.875 * srtt + 0.125 * r;
  }
  rto = std::clamp(SimTime::from_seconds(srtt + 4.0 * rttvar), min_rto, max_rto);
}

void RetransmitTimer::backoff() { rto = std::min(rto + rto, max_rto); }

TcpSource::TcpSource(FlowId flow, TcpParams params, sim::Scheduler& scheduler, Transmit transmit)
    : flow_(flow), params_(params), scheduler_(scheduler), transmit_(std::move(transmit)) {
  if (params_.max_window < 1) throw std::invalid_argument("TcpSource: max_window must be >= 1");
  window_.variant = params_.variant;
  window_.ssthresh = params_.max_window;
  timer_.rto = params_.initial_rto;
}

std::uint32_t TcpSource::effective_window() const {
  const auto cwnd = static_cast<std::uint32_t>(std::floor(window_.cwnd));
  return std::max<std::uint32_t>(1, std::min(cwnd, params_.max_window));
}

void TcpSource::start() {
  if (started_) return;
  started_ = true;
  fill_window();
}

void TcpSource::send_segment(std::uint64_t seq) {
  Packet pkt;
  pkt.flow = flow_;
  pkt.size_bytes = params_.packet_size;
  pkt.seq = seq;
  pkt.kind = sim::PacketKind::data;
  pkt.cls = sim::TrafficClass::tcp;
  pkt.created_at = scheduler_.now();
  ++sent_;
  high_water_ = std::max(high_water_, seq + 1);
  transmit_(pkt);
}

void TcpSource::fill_window() {
  const bool was_idle = in_flight() == 0;
  while (in_flight() < effective_window()) send_segment(next_seq_++);
  if (was_idle && in_flight() > 0) arm_timer();
}

void TcpSource::arm_timer() {
  const std::uint64_t generation = ++timer_generation_;
  scheduler_.schedule_in(timer_.rto, [this, generation] {
    if (generation == timer_generation_) on_timeout();
  });
}

void TcpSource::on_ack(const Packet& ack) {
  if (ack.seq > snd_una_ && ack.seq <= high_water_) {
    snd_una_ = ack.seq;
    // After go-back-N the receiver may already hold segments past next_seq_.
    next_seq_ = std::max(next_seq_, snd_una_);
    timer_.on_rtt_sample(scheduler_.now() - ack.echo);
    window_.on_new_ack();
    if (in_flight() > 0)
      arm_timer();
    else
      ++timer_generation_;
    fill_window();
  } else if (ack.seq == snd_una_ && in_flight() > 0) {
    if (window_.on_duplicate_ack()) {
      ++retransmits_;
      send_segment(snd_una_);
      if (window_.variant == TcpVariant::tahoe) next_seq_ = snd_una_ + 1;
      arm_timer();
    }
    fill_window();
  }
  // Anything else is stale and ignored.
}

void TcpSource::on_timeout() {
  if (in_flight() == 0) return;
  window_.on_timeout();
  timer_.backoff();
  // Go back N: resend from the first unacknowledged segment.
  next_seq_ = snd_una_;
  ++retransmits_;
  send_segment(next_seq_++);
  arm_timer();
}

}  // namespace aqmsim::traffic
