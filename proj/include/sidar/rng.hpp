#pragma once

// Deterministic random streams. Every sampled quantity in the pipeline is
// drawn from a PCG32 stream whose seed is derived from (master seed,
// category tag, index), so replaying a seed reproduces a dataset bit for bit
// and resampling one category never perturbs another.

#include <cstdint>
#include <string_view>

namespace sidar {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

// Stable 64-bit tag for a stream category ("lights", "occluders", ...).
inline std::uint64_t stream_tag(std::string_view name) { return fnv1a(name.data(), name.size()); }

// seed ^ tag ^ index, each decorrelated through splitmix64.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(tag)) ^ index);
}

// PCG32 (O'Neill, pcg-random.org). Counter-based core, cheap to construct,
// so per-pixel and per-sample streams are practical.
class Pcg32 {
 public:
  Pcg32() : Pcg32(0x853c49e6748fea9bull) {}

  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbull) {
    inc_ = (stream << 1u) | 1u;
    state_ = 0u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ull + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // 53-bit uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
    const auto draw = static_cast<std::uint64_t>(next_double() * static_cast<double>(span));
    return lo + static_cast<int>(draw < span ? draw : span - 1);
  }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

}  // namespace sidar
