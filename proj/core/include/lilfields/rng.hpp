#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

#include "lilfields/lattice.hpp"

namespace lilfields {

/// splitmix64 finalizer (public domain); full avalanche on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Independent sub-seed for a derived purpose (replication index, inner
/// Monte Carlo level, split samples, ...).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + kGolden * (index + 1));
}

/// Counter-based random stream addressed by (seed, absolute lattice site,
/// stream id). Draws are a pure function of the address, so overlapping
/// blocks and independently scheduled workers see identical innovations.
/// Stream id 0 carries the primary innovations; nonzero ids give
/// independent redraws at the same site (coupled pairs).
class SiteStream {
 public:
  explicit SiteStream(std::uint64_t seed) : state_(mix64(seed ^ kGolden)) {}

  SiteStream(std::uint64_t seed, std::span<const Coord> site, std::uint64_t stream_id = 0) {
    std::uint64_t h = mix64(seed ^ (kGolden * (stream_id + 1)));
    for (Coord c : site) h = mix64(h ^ (static_cast<std::uint64_t>(c) + kGolden));
    state_ = h;
  }

  SiteStream(std::uint64_t seed, const LatticeIndex& site, std::uint64_t stream_id = 0)
      : SiteStream(seed, site.span(), stream_id) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform on (0,1]; never zero, so it is safe under log().
  double next_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace lilfields
