#include "rrtlab/rng.hpp"

#include <limits>
#include <stdexcept>

namespace rrtlab {

namespace {

// splitmix64 step; used to scramble (seed, stream_id) into a well-mixed
// engine seed so that nearby seeds or stream ids do not yield correlated
// mt19937_64 states
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  std::uint64_t x = seed;
  const std::uint64_t a = splitmix64(x);
  x ^= stream_id * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull;
  const std::uint64_t b = splitmix64(x);
  gen_.seed(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t r = (max % n + 1) % n;  // 2^64 mod n
  std::uint64_t x = gen_();
  if (r != 0) {
    const std::uint64_t limit = max - r;  // accept x <= limit, i.e. x < 2^64 - r
    while (x > limit) x = gen_();
  }
  return x % n;
}

}  // namespace rrtlab
