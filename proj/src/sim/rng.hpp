#pragma once

#include <cstdint>
#include <random>

namespace aqmsim::sim {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded PRNG used for every stochastic decision in a run. Distribution
// helpers are hand-rolled so the stream is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // True with probability p; p <= 0 and p >= 1 do not consume the stream.
  bool bernoulli(double p);

  // Independent stream for a named component, derived from this seed only.
  Rng derive(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace aqmsim::sim
