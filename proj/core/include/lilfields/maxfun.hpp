#pragma once

#include <functional>
#include <vector>

#include "lilfields/fields.hpp"
#include "lilfields/mc.hpp"
#include "lilfields/parallel.hpp"
#include "lilfields/sets.hpp"

namespace lilfields {

/// sqrt(l * LL(l)) for a summation region of cardinality l.
double lil_normalizer(std::int64_t cardinality);

enum class RectSupMode { full, dyadic };

/// max over anchored boxes [1, n] inside the grid of |S_n| / sqrt(|n| LL|n|).
/// mode = dyadic restricts n to power-of-two coordinates. The grid must be
/// anchored at (1,...,1).
double maximal_function_rect(const ValueGrid& grid, RectSupMode mode);

/// Same maximal value over a sequence of summation regions:
/// max_n |sum_{Lambda_n}| / sqrt(l_n LL(l_n)) on one realization covering
/// the union of the regions. Box unions go through the prefix table,
/// explicit site lists through direct summation.
double maximal_function_sets(const FieldModel& model, const SetSequence& seq, std::uint64_t seed);

struct MaxEstimate {
  double lp_estimate = 0.0;
  double se = 0.0;
  std::int64_t reps = 0;
  std::int64_t n_max = 0;        // rectangle truncation, when applicable
  std::int64_t region_count = 0; // set-sequence length, when applicable
};

/// (mean of M^p)^(1/p) over reps draws of the sampler with the delta-method
/// standard error; replication r runs on derive_seed(seed, r).
MaxEstimate estimate_lp_norm(const std::function<double(std::uint64_t)>& sampler, double p,
                             std::int64_t reps, std::uint64_t seed,
                             const ParallelContext& par = ParallelContext());

/// L^p norms of the rectangle maximal function truncated at N = 2^k for each
/// exponent k, computed with common random numbers (one realization per
/// replication shared by all k), so the curve is pointwise nondecreasing
/// exactly, not just in distribution.
std::vector<MaxEstimate> saturation_curve(const FieldModel& model, double p,
                                          const std::vector<int>& exponents, std::int64_t reps,
                                          std::uint64_t seed,
                                          const ParallelContext& par = ParallelContext());

}  // namespace lilfields
