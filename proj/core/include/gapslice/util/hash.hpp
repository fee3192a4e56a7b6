// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_UTIL_HASH_HPP
#define GAPSLICE_UTIL_HASH_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace gapslice {

/// 64-bit FNV-1a. Used for content hashes of input files, state encodings
/// and cache keys. Not cryptographic; collisions are handled by full
/// byte comparison wherever identity matters.
constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr uint64_t fnv1a64(const void* data, size_t n, uint64_t h = kFnvOffset) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = kFnvOffset) {
  return fnv1a64(s.data(), s.size(), h);
}

/// Formats a 64-bit hash as 16 lowercase hex digits.
std::string hash_hex(uint64_t h);

/// splitmix64 step. A small, fast, well-distributed mixer; we use it both
/// as a stream RNG and as the finalizer that derives independent streams
/// from (seed, index) pairs, so samples are a pure function of their index
/// regardless of how work is split across workers.
constexpr uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the RNG stream for sample `index` of the stream family `seed`.
constexpr uint64_t derive_stream(uint64_t seed, uint64_t index) {
  uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + index * 0xd1342543de82ef95ULL);
  // Two mixing rounds so consecutive indices land far apart.
  splitmix64(s);
  s = splitmix64(s);
  return s;
}

/// Counter-based random stream: the sequence drawn from Rng(seed, index)
/// depends only on (seed, index), never on worker count or draw order
/// elsewhere. Cheap enough to construct per sample.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t index = 0) : state_(derive_stream(seed, index)) {}

  uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, bound). bound must be nonzero.
  uint64_t next_below(uint64_t bound) {
    // Rejection-free multiply-shift; bias is negligible for our bounds
    // (all far below 2^32) but we keep the full-width variant anyway.
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    return static_cast<uint64_t>(m >> 64);
  }

  bool next_bool() { return (next_u64() >> 63) != 0; }

 private:
  uint64_t state_;
};

}  // namespace gapslice

#endif  // GAPSLICE_UTIL_HASH_HPP
