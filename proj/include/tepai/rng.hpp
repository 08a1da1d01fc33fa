#pragma once

#include <cstdint>

namespace tepai {

// SplitMix64 finalizer. Used both to derive seeds and, in counter mode, as the
// random stream for Monte Carlo sampling. Keyed streams make every draw a pure
// function of (master_seed, structural indices), so results do not depend on
// evaluation order or thread count.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) noexcept {
  return splitmix64(h ^ (v * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL));
}

/// Map a 64-bit word to a double in [0, 1).
constexpr double u64_to_unit(std::uint64_t r) noexcept {
  return static_cast<double>(r >> 11) * 0x1.0p-53;
}

/// Stream seed for one gate position of one sampled circuit.
constexpr std::uint64_t position_seed(std::uint64_t master_seed, std::uint64_t circuit_index,
                                      std::uint64_t step, std::uint64_t term) noexcept {
  std::uint64_t h = splitmix64(master_seed);
  h = mix_seed(h, circuit_index);
  h = mix_seed(h, step);
  return mix_seed(h, term);
}

/// Counter-mode SplitMix64 stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept { return splitmix64(state_++); }

  /// Uniform double in [0, 1).
  double uniform() noexcept { return u64_to_unit(next_u64()); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace tepai
