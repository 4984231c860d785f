#include "aqm/choke.hpp"

#include <algorithm>
#include <cmath>

namespace aqmsim::aqm {

void ChokeParams::validate(double buffer_packets, std::vector<std::string>& errors) const {
  red.validate(buffer_packets, errors);
  if (cand_num < 1) errors.emplace_back("cand_num: must be >= 1");
  if (interval_num < 1) errors.emplace_back("interval_num: must be >= 1");
}

std::uint32_t choke_candidate_count(double avg, const ChokeParams& params) {
  if (!params.adaptive) return params.cand_num;
  const double width = (params.red.max_th - params.red.min_th) / params.interval_num;
  const double offset = std::max(0.0, avg - params.red.min_th);
  auto region = static_cast<std::uint32_t>(std::floor(offset / width)) + 1;
  region = std::min(region, params.interval_num);
  return 2 * region;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count,
                                                    sim::Rng& rng) {
  count = std::min(count, n);
  std::vector<std::size_t> picked;
  picked.reserve(count);
  for (std::size_t j = n - count; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (std::find(picked.begin(), picked.end(), t) == picked.end())
      picked.push_back(t);
    else
      picked.push_back(j);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

ChokeQueue::ChokeQueue(Capacity capacity, ChokeParams params, sim::Rng rng)
    : QueueDiscipline(capacity), params_(params), rng_(rng) {}

Admission ChokeQueue::admit(const Packet& pkt, SimTime) {
  const RedParams& red = params_.red;
  state_.avg = ewma_update(state_.avg, static_cast<double>(length()), red.w_q);

  if (state_.avg < red.min_th) {
    state_.count = 0;
    return {full_for(pkt) ? Verdict::drop : Verdict::accept, {}};
  }

  const auto candidates =
      sample_without_replacement(length(), choke_candidate_count(state_.avg, params_), rng_);
  std::vector<std::size_t> hits;
  for (std::size_t idx : candidates)
    if (contents()[idx].flow == pkt.flow) hits.push_back(idx);

  if (!hits.empty()) {
    Admission out{Verdict::drop, {}};
    out.evicted.resize(hits.size());
    // Remove back to front so earlier indices stay valid.
    for (std::size_t i = hits.size(); i-- > 0;) out.evicted[i] = remove_at(hits[i]);
    matches_ += hits.size();
    state_.count = 0;
    return out;
  }

  return {red_enqueue(state_, red, full_for(pkt), rng_), {}};
}

}  // namespace aqmsim::aqm
