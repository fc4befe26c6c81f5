#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace msburden::detail {

// splitmix64 finalizer; used to derive independent engine seeds from a master
// seed plus stream tags, so generation order never depends on scheduling.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(mix64(seed) ^ tag);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
  return mix64(mix_seed(seed, tag_a) ^ mix64(tag_b));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t tag) {
  return std::mt19937_64(mix_seed(seed, tag));
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
  return std::mt19937_64(mix_seed(seed, tag_a, tag_b));
}

// FNV-1a 64-bit; stable content hash for provenance metadata and for deriving
// per-subset bootstrap streams from label sets.
inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xCBF29CE484222325ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 0xCBF29CE484222325ULL) {
  return fnv1a64(s.data(), s.size(), h);
}

// multiply-shift reduction of a raw 64-bit word onto [0, n); bias is O(n/2^64)
inline std::size_t bounded(std::uint64_t word, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(word) * static_cast<unsigned __int128>(n)) >> 64);
}

// uniform draw on (0, 1] from the top 53 bits; never returns 0 so -log stays finite
inline double uniform01(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace msburden::detail
