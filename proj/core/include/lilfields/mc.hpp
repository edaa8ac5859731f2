#pragma once

#include <cstdint>
#include <stdexcept>

namespace lilfields {

/// Monte Carlo run parameters shared across estimation routines. The seed is
/// mandatory everywhere (no wall-clock defaults); replication r derives its
/// own seed via derive_seed(seed, r). p is the L^p exponent of the maximal
/// function estimates and must lie in (1,2).
struct McConfig {
  std::int64_t reps = 10000;
  std::uint64_t seed = 1;
  std::int64_t n_max = 64;
  double p = 1.5;
};

inline void validate_lp_exponent(double p) {
  if (!(p > 1.0 && p < 2.0)) {
    throw std::invalid_argument("p must lie in (1,2), got " + std::to_string(p));
  }
}

/// Point estimate with a standard error (zero when the value is exact).
struct NormEstimate {
  double value = 0.0;
  double se = 0.0;
};

}  // namespace lilfields
