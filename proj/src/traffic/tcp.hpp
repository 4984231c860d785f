#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "sim/packet.hpp"
#include "sim/scheduler.hpp"

namespace aqmsim::traffic {

using sim::FlowId;
using sim::Packet;
using sim::SimTime;

enum class TcpVariant : std::uint8_t { reno, tahoe };

std::string_view to_string(TcpVariant v);
std::optional<TcpVariant> parse_tcp_variant(std::string_view name);

// Loss-driven AIMD window. Units are packets.
struct CongestionWindow {
  double cwnd = 1;
  double ssthresh = 64;
  std::uint32_t dup_acks = 0;
  bool in_recovery = false;
  TcpVariant variant = TcpVariant::reno;

  // New cumulative ack: leave recovery, or grow (slow start +1, congestion
  // avoidance +1/cwnd).
  void on_new_ack();
  // Returns true when this duplicate triggers a fast retransmit.
  bool on_duplicate_ack();
  void on_timeout();
};

// RTO estimator with exponential backoff.
struct RetransmitTimer {
  SimTime rto = SimTime::from_ns(1'000'000'000);
  SimTime min_rto = SimTime::from_ns(200'000'000);
  SimTime max_rto = SimTime::from_ns(64'000'000'000);
  double srtt = 0;    // seconds
  double rttvar = 0;  // seconds
  bool has_sample = false;

  void on_rtt_sample(SimTime rtt);
  void backoff();
};

struct TcpParams {
  std::uint32_t max_window = 50;  // packets
  std::uint32_t packet_size = 1000;
  std::uint32_t ack_size = 40;
  TcpVariant variant = TcpVariant::reno;
  SimTime initial_rto = SimTime::from_ns(1'000'000'000);
};

// Bulk-transfer (FTP-like) sender with an infinite backlog.
class TcpSource {
 public:
  using Transmit = std::function<void(const Packet&)>;

  TcpSource(FlowId flow, TcpParams params, sim::Scheduler& scheduler, Transmit transmit);

  void start();
  // `ack.seq` is the receiver's next expected segment.
  void on_ack(const Packet& ack);
  void on_timeout();

  FlowId flow() const { return flow_; }
  const CongestionWindow& window() const { return window_; }
  CongestionWindow& mutable_window() { return window_; }
  const RetransmitTimer& timer() const { return timer_; }
  std::uint64_t next_seq() const { return next_seq_; }
  std::uint64_t highest_acked() const { return snd_una_; }
  std::uint64_t in_flight() const { return next_seq_ - snd_una_; }
  std::uint64_t sent() const { return sent_; }
  std::uint64_t retransmits() const { return retransmits_; }
  std::uint32_t effective_window() const;

 private:
  void send_segment(std::uint64_t seq);
  void fill_window();
  void arm_timer();

  FlowId flow_;
  TcpParams params_;
  sim::Scheduler& scheduler_;
  Transmit transmit_;
  CongestionWindow window_;
  RetransmitTimer timer_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t snd_una_ = 0;
  std::uint64_t high_water_ = 0;  // one past the highest segment ever sent
  std::uint64_t sent_ = 0;
  std::uint64_t retransmits_ = 0;
  std::uint64_t timer_generation_ = 0;
  bool started_ = false;
};

}  // namespace aqmsim::traffic
