#pragma once

#include <string>
#include <vector>

#include "lilfields/fields.hpp"
#include "lilfields/parallel.hpp"

namespace lilfields {

struct VerifyPoint {
  double threshold = 0.0;
  double empirical = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool pass = false;  // empirical <= bound + 3 se
};

/// Monte Carlo check of a proved inequality on a grid of thresholds.
/// Replications share random numbers across the grid, so the empirical
/// probabilities are exactly monotone along it.
struct VerifyReport {
  std::string name;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<VerifyPoint> points;
  bool all_pass = false;
};

/// P(|sum d_j| > x, sum d_j^2 <= y) <= 2 exp(-x^2 / (2(y + V^2))) for an
/// i.i.d. square-integrable sequence, V^2 = sum E d_j^2.
VerifyReport check_bercu_touati(const InnovationSpec& innov, int n, const std::vector<double>& x_grid,
                                double y, std::int64_t reps, std::uint64_t seed,
                                const ParallelContext& par = ParallelContext());

/// P(|sum d_i| > x) <= 2 exp(-(y/c^2) h(xc/y)), h(u) = (1+u)ln(1+u) - u, for
/// bounded centered i.i.d. with |d| <= c and y >= sum E d_i^2. Unbounded
/// innovations are rejected (the hypothesis requires a finite c > 0).
VerifyReport check_freedman(const InnovationSpec& innov, int n, const std::vector<double>& x_grid,
                            double y, std::int64_t reps, std::uint64_t seed,
                            const ParallelContext& par = ParallelContext());

enum class SiteTransform { absolute_value, square };

/// Multidimensional maximal ergodic bound for a nonnegative stationary field:
/// P(sup_n avg_{[1,n]} Y > y) <= int_1^inf P(Y > y u 2^-d) (log u)^(d-1) du.
/// The sup is truncated at n_max per coordinate (only weakening the left
/// side); the right side integrates the empirical single-site tail from an
/// independent sample of tail_reps draws, exactly on its jump grid.
VerifyReport check_maximal_ergodic(const FieldModel& model, SiteTransform transform,
                                   std::int64_t n_max, const std::vector<double>& y_grid,
                                   std::int64_t reps, std::int64_t tail_reps, std::uint64_t seed,
                                   const ParallelContext& par = ParallelContext());

std::string to_json_string(const VerifyReport& report);
std::string to_csv_string(const VerifyReport& report);

}  // namespace lilfields
