#pragma once

#include <cstdint>
#include <random>

namespace rrtlab {

// Deterministic random stream addressed by (seed, stream_id).  Identical
// parameters must reproduce the exact same draws on every platform, so all
// value derivation from raw engine output is done by hand here instead of
// going through std::uniform_*_distribution (whose algorithms are
// implementation-defined and differ between standard libraries).
//
// Replicated experiments give each replicate its own stream_id, which makes
// the replicates independent and safe to run in any order.
class RngStream {
public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0, 1) with 53 random mantissa bits
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer on [0, n); rejection sampling keeps every value exactly
  // equally likely regardless of n
  std::uint64_t uniform_index(std::uint64_t n);

  bool chance(double p) { return uniform01() < p; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::mt19937_64 gen_;
};

}  // namespace rrtlab
