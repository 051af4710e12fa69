#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace fpct {

// Counter-based random stream: a stateless avalanche hash of (seed, key
// words).  Every consumer addresses the stream by an absolute key, so two
// windows that overlap in space see identical draws regardless of their
// sizes or sampling order.
namespace rng {

inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline uint64_t stream(uint64_t seed, std::span<const int64_t> words) {
  uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  for (int64_t w : words) h = mix64(h + 0x9e3779b97f4a7c15ULL + static_cast<uint64_t>(w));
  return h;
}

inline uint64_t stream(uint64_t seed, std::initializer_list<int64_t> words) {
  return stream(seed, std::span<const int64_t>(words.begin(), words.size()));
}

// 53-bit uniform in [0, 1).
inline double uniform01(uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace rng
}  // namespace fpct
