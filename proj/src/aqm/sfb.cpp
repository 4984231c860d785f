#include "aqm/sfb.hpp"

#include <algorithm>
#include <stdexcept>

namespace aqmsim::aqm {

double SfbParams::bin_size(double buffer_packets) const {
  return bin_size_factor / static_cast<double>(bins) * buffer_packets;
}

void SfbParams::validate(std::vector<std::string>& errors) const {
  if (levels < 1) errors.emplace_back("levels: must be >= 1");
  if (bins < 1) errors.emplace_back("bins: must be >= 1");
  if (!(d1 > 0 && d1 <= 1)) errors.emplace_back("d1: must lie in (0, 1]");
  if (!(d2 > 0 && d2 <= 1)) errors.emplace_back("d2: must lie in (0, 1]");
  if (freeze_time < SimTime{}) errors.emplace_back("freeze_time: must be >= 0");
  if (!(bin_size_factor > 0)) errors.emplace_back("bin_size_factor: must be > 0");
  if (boxtime < SimTime{}) errors.emplace_back("boxtime: must be >= 0");
  if (!(boxtime_jitter >= 0 && boxtime_jitter < 1))
    errors.emplace_back("boxtime_jitter: must lie in [0, 1)");
  if (h_interval <= SimTime{}) errors.emplace_back("h_interval: must be > 0");
}

std::uint32_t sfb_hash(sim::FlowId flow, std::uint32_t level, std::uint64_t salt,
                       std::uint32_t bins) {
  const std::uint64_t h =
      sim::splitmix64(sim::splitmix64(salt ^ flow) + 0x9e3779b97f4a7c15ULL * (level + 1));
  return static_cast<std::uint32_t>(h % bins);
}

SfbGrid::SfbGrid(std::uint32_t levels, std::uint32_t bins, std::vector<std::uint64_t> salts)
    : levels_(levels), bins_(bins), salts_(std::move(salts)),
      cells_(static_cast<std::size_t>(levels) * bins) {
  if (salts_.size() != levels_) throw std::invalid_argument("SfbGrid: one salt per level");
}

std::uint32_t SfbGrid::index(sim::FlowId flow, std::uint32_t level) const {
  return sfb_hash(flow, level, salts_[level], bins_);
}

SfbBin& SfbGrid::at(std::uint32_t level, std::uint32_t index) {
  return cells_.at(static_cast<std::size_t>(level) * bins_ + index);
}

const SfbBin& SfbGrid::at(std::uint32_t level, std::uint32_t index) const {
  return cells_.at(static_cast<std::size_t>(level) * bins_ + index);
}

std::uint64_t SfbGrid::level_occupancy(std::uint32_t level) const {
  std::uint64_t sum = 0;
  for (std::uint32_t i = 0; i < bins_; ++i) sum += at(level, i).qlen;
  return sum;
}

Verdict sfb_ratelimit(SfbState& state, const SfbParams& params, SimTime now, sim::Rng& rng) {
  SimTime box = params.boxtime;
  if (params.boxtime_jitter > 0) {
    const double scale = 1.0 + rng.uniform(-params.boxtime_jitter, params.boxtime_jitter);
    box = SimTime::from_seconds(params.boxtime.seconds() * scale);
  }
  if (box <= SimTime{} || now - state.last_nonresponsive_enqueue > box) {
    state.last_nonresponsive_enqueue = now;
    return Verdict::accept;
  }
  return Verdict::drop;
}

namespace {

SfbGrid make_grid(const SfbParams& p, sim::Rng& rng) {
  std::vector<std::uint64_t> salts(p.levels);
  for (auto& s : salts) s = rng.next_u64();
  return SfbGrid{p.levels, p.bins, std::move(salts)};
}

}  // namespace

SfbQueue::SfbQueue(Capacity capacity, SfbParams params, sim::Rng rng, std::uint32_t packet_size)
    : QueueDiscipline(capacity),
      params_(params),
      rng_(rng),
      bin_size_(params.bin_size(capacity.in_packets(packet_size))),
      state_{make_grid(params_, rng_), make_grid(params_, rng_), SimTime::never(),
             params.h_interval} {}

std::vector<std::uint64_t> SfbQueue::fresh_salts() {
  std::vector<std::uint64_t> salts(params_.levels);
  for (auto& s : salts) s = rng_.next_u64();
  return salts;
}

double SfbQueue::pmin(sim::FlowId flow) const {
  double p = 1.0;
  for (std::uint32_t l = 0; l < params_.levels; ++l)
    p = std::min(p, state_.active.at(l, state_.active.index(flow, l)).pm());
  return p;
}

void SfbQueue::maybe_rotate(SimTime now) {
  while (now >= state_.next_hash_switch) rotate_hashes(now);
}

void SfbQueue::rotate_hashes(SimTime) {
  const std::uint32_t levels = params_.levels;
  state_.active = std::move(state_.warmup);
  state_.warmup = SfbGrid{levels, params_.bins, fresh_salts()};
  const auto& queued = contents();
  for (std::size_t k = 0; k < queued.size(); ++k) {
    const std::size_t base = k * 2 * levels;
    for (std::uint32_t l = 0; l < levels; ++l) {
      slots_[base + l] = slots_[base + levels + l];
      const std::uint32_t idx = state_.warmup.index(queued[k].flow, l);
      slots_[base + levels + l] = idx;
      ++state_.warmup.at(l, idx).qlen;
    }
  }
  state_.next_hash_switch += params_.h_interval;
  ++rotations_;
}

Admission SfbQueue::admit(const Packet& pkt, SimTime now) {
  maybe_rotate(now);
  const std::uint32_t levels = params_.levels;
  pending_.assign(2 * static_cast<std::size_t>(levels), 0);
  for (std::uint32_t l = 0; l < levels; ++l) {
    pending_[l] = state_.active.index(pkt.flow, l);
    pending_[levels + l] = state_.warmup.index(pkt.flow, l);
  }

  bool overflow = false;
  auto update_bins = [&](SfbGrid& grid, std::size_t offset, bool decides) {
    for (std::uint32_t l = 0; l < levels; ++l) {
      SfbBin& bin = grid.at(l, pending_[offset + l]);
      if (bin.qlen > bin_size_) {
        bin.marking.on_loss(now, params_.d1, params_.freeze_time);
        if (decides) overflow = true;
      } else if (bin.qlen == 0) {
        bin.marking.on_idle(now, params_.d2, params_.freeze_time);
      }
    }
  };
  update_bins(state_.active, 0, true);
  update_bins(state_.warmup, levels, false);

  if (overflow || full_for(pkt)) return {Verdict::drop, {}};

  double p = 1.0;
  for (std::uint32_t l = 0; l < levels; ++l)
    p = std::min(p, state_.active.at(l, pending_[l]).pm());

  if (p >= 1.0) {
    // Non-responsive: push its warm-up bins toward 1 so it stays boxed
    // after the next switch.
    for (std::uint32_t l = 0; l < levels; ++l)
      state_.warmup.at(l, pending_[levels + l]).marking.on_loss(now, params_.d1,
                                                                params_.freeze_time);
    ++ratelimited_;
    return {sfb_ratelimit(state_, params_, now, rng_), {}};
  }
  return {rng_.bernoulli(p) ? Verdict::drop : Verdict::accept, {}};
}

void SfbQueue::on_enqueued(const Packet&, SimTime) {
  const std::uint32_t levels = params_.levels;
  for (std::uint32_t l = 0; l < levels; ++l) {
    ++state_.active.at(l, pending_[l]).qlen;
    ++state_.warmup.at(l, pending_[levels + l]).qlen;
  }
  slots_.insert(slots_.end(), pending_.begin(), pending_.end());
}

void SfbQueue::on_departure(const Packet&, SimTime now) {
  const std::uint32_t levels = params_.levels;
  auto release = [&](SfbGrid& grid, std::uint32_t level, std::uint32_t idx) {
    SfbBin& bin = grid.at(level, idx);
    if (bin.qlen > 0 && --bin.qlen == 0) bin.marking.on_idle(now, params_.d2, params_.freeze_time);
  };
  for (std::uint32_t l = 0; l < levels; ++l) {
    release(state_.active, l, slots_[l]);
    release(state_.warmup, l, slots_[levels + l]);
  }
  slots_.erase(slots_.begin(), slots_.begin() + 2 * levels);
}

}  // namespace aqmsim::aqm
