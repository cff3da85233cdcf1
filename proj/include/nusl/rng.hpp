#pragma once

#include <array>
#include <cstdint>

namespace nusl {

/// Deterministic counter-keyed random stream. A stream is fully determined
/// by (seed, stream_index); distinct stream indices yield statistically
/// independent sequences, so trials can be scheduled on any number of
/// workers without changing results. xoshiro256++ core, splitmix64 keying.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal via Box-Muller (explicit, no library distribution, so
  /// sequences are identical across standard library implementations).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n), unbiased (rejection).
  std::uint64_t below(std::uint64_t n);

 private:
  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Combines two indices into one stream key (for nested trial schedules).
std::uint64_t mix_indices(std::uint64_t a, std::uint64_t b);

}  // namespace nusl
