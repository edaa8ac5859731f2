#include "lilfields/maxfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lilfields/scalars.hpp"

namespace lilfields {

double lil_normalizer(std::int64_t cardinality) {
  if (cardinality < 1) throw std::invalid_argument("lil_normalizer: cardinality must be >= 1");
  const double l = static_cast<double>(cardinality);
  return std::sqrt(l * slow_log_log(l));
}

namespace {

void require_anchor_one(const ValueGrid& grid, const char* what) {
  for (int q = 0; q < grid.dim(); ++q) {
    if (grid.origin()[q] != 1) {
      throw std::domain_error(std::string(what) + ": grid must be anchored at (1,...,1), origin is " +
                              to_string(grid.origin()));
    }
  }
}

}  // namespace

double maximal_function_rect(const ValueGrid& grid, RectSupMode mode) {
  require_anchor_one(grid, "maximal_function_rect");
  const PrefixTable table = build_prefix_table(grid);
  const int d = grid.dim();
  double best = 0.0;
  if (mode == RectSupMode::full) {
    // Odometer over the whole grid; |n| accumulates as the product of the
    // absolute coordinates n_q = idx_q + 1.
    for_each_site(std::span<const Coord>(grid.extents()),
                  [&](std::int64_t flat, std::span<const Coord> idx) {
                    std::int64_t card = 1;
                    for (int q = 0; q < d; ++q) card *= idx[static_cast<std::size_t>(q)] + 1;
                    const double value =
                        std::abs(table.anchored_flat(flat)) / lil_normalizer(card);
                    best = std::max(best, value);
                  });
    return best;
  }
  int max_exp = 0;
  Coord min_extent = grid.extents()[0];
  for (Coord e : grid.extents()) min_extent = std::min(min_extent, e);
  while ((Coord{1} << (max_exp + 1)) <= min_extent) ++max_exp;
  for (const LatticeIndex& n : dyadic_indices(max_exp, d)) {
    std::int64_t card = 1;
    for (int q = 0; q < d; ++q) card *= n[q];
    const double value = std::abs(table.anchored_sum(n)) / lil_normalizer(card);
    best = std::max(best, value);
  }
  return best;
}

double maximal_function_sets(const FieldModel& model, const SetSequence& seq, std::uint64_t seed) {
  if (seq.regions.empty()) throw std::invalid_argument("maximal_function_sets: empty sequence");
  if (seq.cards.size() != seq.regions.size()) {
    throw std::invalid_argument("maximal_function_sets: cards/regions length mismatch");
  }
  const int d = model_dim(model);
  // Bounding block of all regions.
  LatticeIndex lo, hi;
  bool first = true;
  for (const Region& region : seq.regions) {
    if (region_dim(region) != d) {
      throw std::domain_error("maximal_function_sets: region dimension does not match the model");
    }
    Rect bound = std::visit(
        [&](const auto& r) -> Rect {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, RectUnion>) {
            return r.bounding_box();
          } else {
            if (r.empty()) throw std::invalid_argument("maximal_function_sets: empty site list");
            LatticeIndex l = r.front(), h = r.front();
            for (const LatticeIndex& site : r) {
              for (int q = 0; q < d; ++q) {
                l[q] = std::min(l[q], site[q]);
                h[q] = std::max(h[q], site[q]);
              }
            }
            return Rect(l, h);
          }
        },
        region);
    if (first) {
      lo = bound.lo();
      hi = bound.hi();
      first = false;
    } else {
      for (int q = 0; q < d; ++q) {
        lo[q] = std::min(lo[q], bound.lo()[q]);
        hi[q] = std::max(hi[q], bound.hi()[q]);
      }
    }
  }
  const ValueGrid grid = simulate_block(model, Rect(lo, hi), seed);
  const PrefixTable table = build_prefix_table(grid);
  double best = 0.0;
  for (std::size_t n = 0; n < seq.regions.size(); ++n) {
    const std::int64_t card = seq.cards[n];
    if (card != region_cardinality(seq.regions[n])) {
      throw std::invalid_argument("maximal_function_sets: recorded cardinality disagrees with region " +
                                  std::to_string(n + 1));
    }
    const double sum = std::visit(
        [&](const auto& r) -> double {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, RectUnion>) {
            double acc = 0.0;
            for (const Rect& box : r.boxes()) acc += sum_over_rect(table, box);
            return acc;
          } else {
            double acc = 0.0;
            for (const LatticeIndex& site : r) acc += grid.at(site);
            return acc;
          }
        },
        seq.regions[n]);
    best = std::max(best, std::abs(sum) / lil_normalizer(card));
  }
  return best;
}

MaxEstimate estimate_lp_norm(const std::function<double(std::uint64_t)>& sampler, double p,
                             std::int64_t reps, std::uint64_t seed, const ParallelContext& par) {
  validate_lp_exponent(p);
  if (reps < 30) throw std::invalid_argument("estimate_lp_norm: reps must be >= 30");
  std::vector<double> powers(static_cast<std::size_t>(reps));
  par.for_each_index(reps, [&](std::int64_t r) {
    const double value = sampler(derive_seed(seed, static_cast<std::uint64_t>(r)));
    powers[static_cast<std::size_t>(r)] = std::pow(std::abs(value), p);
  });
  // Fixed-order serial reduction: results do not depend on the worker count.
  double sum = 0.0, sum_sq = 0.0;
  for (double v : powers) {
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  MaxEstimate out;
  out.reps = reps;
  if (mean <= 0.0) return out;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  out.lp_estimate = std::pow(mean, 1.0 / p);
  out.se = std::sqrt(var / n) * std::pow(mean, 1.0 / p - 1.0) / p;
  return out;
}

std::vector<MaxEstimate> saturation_curve(const FieldModel& model, double p,
                                          const std::vector<int>& exponents, std::int64_t reps,
                                          std::uint64_t seed, const ParallelContext& par) {
  validate_lp_exponent(p);
  if (exponents.empty()) throw std::invalid_argument("saturation_curve: need exponents");
  for (std::size_t k = 1; k < exponents.size(); ++k) {
    if (exponents[k] <= exponents[k - 1]) {
      throw std::invalid_argument("saturation_curve: exponents must increase");
    }
  }
  if (exponents.front() < 0) throw std::invalid_argument("saturation_curve: exponents must be >= 0");
  const int d = model_dim(model);
  const int k_count = static_cast<int>(exponents.size());
  const Coord n_top = Coord{1} << exponents.back();
  const Rect block(LatticeIndex::ones(d), LatticeIndex::constant(d, n_top));

  // Common random numbers: one realization per replication serves every k.
  // Each site n contributes to all boxes with 2^k >= max_q n_q, so we bucket
  // per-site values by the smallest admissible exponent and prefix-max.
  std::vector<double> powers(static_cast<std::size_t>(reps) * static_cast<std::size_t>(k_count));
  par.for_each_index(reps, [&](std::int64_t r) {
    const ValueGrid grid = simulate_block(model, block, derive_seed(seed, static_cast<std::uint64_t>(r)));
    const PrefixTable table = build_prefix_table(grid);
    std::vector<double> bucket(static_cast<std::size_t>(k_count), 0.0);
    for_each_site(std::span<const Coord>(grid.extents()),
                  [&](std::int64_t flat, std::span<const Coord> idx) {
                    std::int64_t card = 1;
                    Coord max_coord = 0;
                    for (int q = 0; q < d; ++q) {
                      const Coord nq = idx[static_cast<std::size_t>(q)] + 1;
                      card *= nq;
                      max_coord = std::max(max_coord, nq);
                    }
                    int slot = k_count;
                    for (int k = 0; k < k_count; ++k) {
                      if ((Coord{1} << exponents[static_cast<std::size_t>(k)]) >= max_coord) {
                        slot = k;
                        break;
                      }
                    }
                    if (slot == k_count) return;
                    const double value = std::abs(table.anchored_flat(flat)) / lil_normalizer(card);
                    bucket[static_cast<std::size_t>(slot)] =
                        std::max(bucket[static_cast<std::size_t>(slot)], value);
                  });
    double running = 0.0;
    for (int k = 0; k < k_count; ++k) {
      running = std::max(running, bucket[static_cast<std::size_t>(k)]);
      powers[static_cast<std::size_t>(r) * static_cast<std::size_t>(k_count) +
             static_cast<std::size_t>(k)] = std::pow(running, p);
    }
  });

  std::vector<MaxEstimate> curve(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t r = 0; r < reps; ++r) {
      const double v = powers[static_cast<std::size_t>(r) * static_cast<std::size_t>(k_count) +
                              static_cast<std::size_t>(k)];
      sum += v;
      sum_sq += v * v;
    }
    const double n = static_cast<double>(reps);
    const double mean = sum / n;
    MaxEstimate& est = curve[static_cast<std::size_t>(k)];
    est.reps = reps;
    est.n_max = Coord{1} << exponents[static_cast<std::size_t>(k)];
    if (mean > 0.0) {
      const double var = std::max(0.0, sum_sq / n - mean * mean);
      est.lp_estimate = std::pow(mean, 1.0 / p);
      est.se = std::sqrt(var / n) * std::pow(mean, 1.0 / p - 1.0) / p;
    }
  }
  return curve;
}

}  // namespace lilfields
