#pragma once

#include <cstdint>

namespace growthlab {

/// SplitMix64 finalizer: a full-avalanche 64-bit mixer (each input bit
/// flips every output bit with probability ~1/2). The constants are part
/// of the replay contract and must never change.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream ids keep independent uses of the site-keyed PRF from colliding.
namespace stream {
inline constexpr std::uint64_t kTieCoin = 0;
inline constexpr std::uint64_t kInitialDraw = 1;
inline constexpr std::uint64_t kRedMark = 2;
inline constexpr std::uint64_t kPotentiallyBlue = 3;
inline constexpr std::uint64_t kScratch = 4;
}  // namespace stream

/// Keyed PRF over (seed, stream, x, y, tick). Counter-based: no generator
/// state, so sites, ticks and replicates can be evaluated in any order and
/// the same inputs always give the same output.
constexpr std::uint64_t site_prf(std::uint64_t seed, std::uint64_t stream,
                                 std::int64_t x, std::int64_t y,
                                 std::int64_t tick) noexcept {
  std::uint64_t h = mix64(seed ^ 0x8824a0c96bc82eb1ULL);
  h = mix64(h ^ stream);
  h = mix64(h ^ static_cast<std::uint64_t>(x));
  h = mix64(h ^ static_cast<std::uint64_t>(y));
  h = mix64(h ^ static_cast<std::uint64_t>(tick));
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t stream,
                           std::int64_t x, std::int64_t y,
                           std::int64_t tick) noexcept {
  return static_cast<double>(site_prf(seed, stream, x, y, tick) >> 11) *
         0x1.0p-53;
}

/// Fair winner among n_claimants (>= 1), pure in its arguments. Uses the
/// multiply-high reduction, whose bias is < n/2^64.
constexpr int coin(std::uint64_t seed, std::uint64_t stream, std::int64_t x,
                   std::int64_t y, std::int64_t tick, int n_claimants) noexcept {
  const std::uint64_t h = site_prf(seed, stream, x, y, tick);
  return static_cast<int>(
      (static_cast<unsigned __int128>(h) *
       static_cast<unsigned __int128>(static_cast<std::uint64_t>(n_claimants))) >>
      64);
}

/// Derives an independent per-replicate seed from a base seed.
constexpr std::uint64_t seed_for_replicate(std::uint64_t base,
                                           std::uint64_t replicate) noexcept {
  return mix64(base ^ mix64(replicate ^ 0x5851f42d4c957f2dULL));
}

}  // namespace growthlab
