#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace snet::rng {

// SplitMix64 increment (golden ratio) and finalizer constants (Steele, Lea,
// Flood 2014; the same mix as java.util.SplittableRandom).
inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kMul1 = 0xbf58476d1ce4e5b9ULL;
inline constexpr std::uint64_t kMul2 = 0x94d049bb133111ebULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * kMul1;
  z = (z ^ (z >> 27)) * kMul2;
  return z ^ (z >> 31);
}

/// Domain tags keep the generator and process streams disjoint.
enum class Stream : std::uint64_t {
  ArcSubstitution = 0x4152435355425354ULL,
  ProcessStep = 0x50524f4353544550ULL,
  RunSeed = 0x52554e5345454453ULL,
};

/// Folds a seed and an ordered list of coordinates into one stream key.
constexpr std::uint64_t derive_key(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t k = mix64(seed + kGamma);
  k = mix64(k ^ static_cast<std::uint64_t>(stream));
  for (const auto c : coords) k = mix64((k + kGamma) ^ c);
  return k;
}

/// Counter-based SplitMix64 stream: the n-th output is mix64(key + (n+1) * gamma).
/// Any (key, position) is reachable in O(1), so streams keyed by
/// (seed, step, index) are independent of iteration order.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterEngine(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

/// Uniform integer in [0, bound) without modulo bias (Lemire's method).
inline std::uint64_t uniform_below(CounterEngine& eng, std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(eng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(eng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(CounterEngine& eng) noexcept {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace snet::rng
