#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "sim/packet.hpp"
#include "sim/time.hpp"

namespace aqmsim::aqm {

using sim::Packet;
using sim::SimTime;

enum class Verdict : std::uint8_t { accept, drop };

// Buffer size, counted either in packets or in bytes.
struct Capacity {
  enum class Unit : std::uint8_t { packets, bytes };

  Unit unit = Unit::packets;
  std::uint64_t value = 150;

  static Capacity packets(std::uint64_t n) { return {Unit::packets, n}; }
  static Capacity bytes(std::uint64_t n) { return {Unit::bytes, n}; }

  // Capacity expressed in packets of `packet_size` bytes (bytes mode divides).
  double in_packets(std::uint32_t packet_size) const;

  bool operator==(const Capacity&) const = default;
};

struct Admission {
  Verdict verdict = Verdict::accept;
  // Queued packets removed as a side effect of this arrival (CHOKe matches),
  // in their former queue order.
  std::vector<Packet> evicted;

  bool accepted() const { return verdict == Verdict::accept; }
};

// Single FIFO buffer with a pluggable admission policy. Subclasses decide
// drops; ordering is always first-in first-out.
class QueueDiscipline {
 public:
  explicit QueueDiscipline(Capacity capacity);
  virtual ~QueueDiscipline() = default;

  QueueDiscipline(const QueueDiscipline&) = delete;
  QueueDiscipline& operator=(const QueueDiscipline&) = delete;

  Admission enqueue(const Packet& pkt, SimTime now);
  // Empty queue reports an idle link to the policy and returns nullopt.
  std::optional<Packet> dequeue(SimTime now);

  virtual std::string_view name() const = 0;

  std::size_t length() const { return fifo_.size(); }
  std::uint64_t bytes() const { return bytes_; }
  std::size_t class_length(sim::TrafficClass cls) const;
  const std::deque<Packet>& contents() const { return fifo_; }
  const Capacity& capacity() const { return capacity_; }

  // True when `pkt` cannot physically fit in the buffer.
  bool full_for(const Packet& pkt) const;

 protected:
  virtual Admission admit(const Packet& pkt, SimTime now) = 0;
  virtual void on_enqueued(const Packet& /*pkt*/, SimTime /*now*/) {}
  virtual void on_departure(const Packet& /*pkt*/, SimTime /*now*/) {}
  virtual void on_idle(SimTime /*now*/) {}

  // Removes the packet at `index` without disturbing the order of the rest.
  Packet remove_at(std::size_t index);

 private:
  void account(const Packet& pkt, int sign);

  Capacity capacity_;
  std::deque<Packet> fifo_;
  std::uint64_t bytes_ = 0;
  std::size_t tcp_packets_ = 0;
  std::size_t udp_packets_ = 0;
};

Verdict droptail_enqueue(std::size_t qlen, std::size_t capacity);

class DropTailQueue final : public QueueDiscipline {
 public:
  using QueueDiscipline::QueueDiscipline;
  std::string_view name() const override { return "droptail"; }

 protected:
  Admission admit(const Packet& pkt, SimTime now) override;
};

}  // namespace aqmsim::aqm
