#pragma once

#include <cstdint>

namespace otrim {

// Counter-based uniform generator (splitmix64 stream). Every draw is a pure
// function of (seed, counter), so replications can be split across workers
// without changing the numbers: substream seeds are derived by hashing and
// each substream is consumed sequentially by exactly one task.
namespace rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// k-th 64-bit word of the stream keyed by `seed`.
inline std::uint64_t at(std::uint64_t seed, std::uint64_t k) {
  return mix(seed + (k + 1) * kGamma);
}

// Key-fold for substreams: order-sensitive, stable across platforms.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a) {
  return mix(seed ^ (mix(a + kGamma) + kGamma));
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return substream(substream(seed, a), b);
}

inline double to_unit(std::uint64_t u) {
  return static_cast<double>(u >> 11) * 0x1.0p-53;  // [0,1)
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return at(seed_, ctr_++); }
  double next_unit() { return to_unit(next_u64()); }

 private:
  std::uint64_t seed_;
  std::uint64_t ctr_ = 0;
};

}  // namespace rng
}  // namespace otrim
