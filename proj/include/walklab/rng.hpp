#pragma once

#include <array>
#include <cstdint>

namespace walklab {

/// Seed used when a run does not specify one. Never derived from wall-clock time.
inline constexpr std::uint64_t kDefaultMasterSeed = 42;

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Top 53 bits of a raw draw scaled into [0, 1).
constexpr double unit_from_bits(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// 2v - 1 with v = unit_from_bits(bits); lies in [-1, 1).
constexpr double signed_from_bits(std::uint64_t bits) noexcept {
  return 2.0 * unit_from_bits(bits) - 1.0;
}

/// xoshiro256++ stream keyed by (master_seed, path_index).
///
/// Seeding: z = master_seed ^ (path_index * kPathMultiplier), then the four
/// state words are successive SplitMix64 outputs starting from z
/// (z += kGolden; word = splitmix64_finalize(z)). The multiplier differs from
/// the SplitMix increment so that neighbouring path indices never produce
/// shifted copies of each other's state.
///
/// A stream is single-owner; copy it to fork a replay.
class RngStream {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kPathMultiplier = 0xD1B54A32D192ED03ULL;

  constexpr RngStream(std::uint64_t master_seed, std::uint64_t path_index) noexcept
      : master_seed_(master_seed), path_index_(path_index) {
    std::uint64_t z = master_seed ^ (path_index * kPathMultiplier);
    for (auto& word : state_) {
      z += kGolden;
      word = splitmix64_finalize(z);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
  }

  constexpr std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// One draw mapped to [0, 1).
  constexpr double uniform_unit() noexcept { return unit_from_bits(next_u64()); }
  /// One draw mapped to [-1, 1).
  constexpr double uniform_signed() noexcept { return signed_from_bits(next_u64()); }

  constexpr const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }
  constexpr std::uint64_t master_seed() const noexcept { return master_seed_; }
  constexpr std::uint64_t path_index() const noexcept { return path_index_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  std::uint64_t master_seed_;
  std::uint64_t path_index_;
};

inline RngStream new_stream(std::uint64_t master_seed, std::uint64_t path_index) noexcept {
  return RngStream(master_seed, path_index);
}

}  // namespace walklab
