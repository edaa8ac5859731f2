#include "lilfields/devcheck.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "lilfields/errors.hpp"
#include "lilfields/io.hpp"
#include "lilfields/lattice.hpp"
#include "lilfields/maxfun.hpp"

namespace lilfields {

namespace {

void require_grid(const std::vector<double>& grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty threshold grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) {
      throw std::invalid_argument(std::string(what) + ": threshold grid must increase");
    }
  }
}

VerifyReport assemble(std::string name, std::int64_t reps, std::uint64_t seed,
                      const std::vector<double>& grid, const std::vector<std::int64_t>& counts,
                      const std::vector<double>& bounds) {
  VerifyReport report;
  report.name = std::move(name);
  report.reps = reps;
  report.seed = seed;
  report.all_pass = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    VerifyPoint pt;
    pt.threshold = grid[k];
    pt.empirical = static_cast<double>(counts[k]) / static_cast<double>(reps);
    pt.se = std::sqrt(std::max(0.0, pt.empirical * (1.0 - pt.empirical)) / static_cast<double>(reps));
    pt.bound = bounds[k];
    pt.pass = pt.empirical <= pt.bound + 3.0 * pt.se;
    report.all_pass = report.all_pass && pt.pass;
    report.points.push_back(pt);
  }
  return report;
}

double freedman_h(double u) { return (1.0 + u) * std::log1p(u) - u; }

// Antiderivative of (log u)^(d-1): W_0 = u, W_m = u (ln u)^m - m W_{m-1}.
double log_power_antiderivative(int m, double u) {
  if (m == 0) return u;
  return u * std::pow(std::log(u), m) - m * log_power_antiderivative(m - 1, u);
}

}  // namespace

VerifyReport check_bercu_touati(const InnovationSpec& innov, int n, const std::vector<double>& x_grid,
                                double y, std::int64_t reps, std::uint64_t seed,
                                const ParallelContext& par) {
  if (n < 1) throw std::invalid_argument("check_bercu_touati: n must be >= 1");
  if (!(y > 0.0)) throw std::invalid_argument("check_bercu_touati: y must be positive");
  if (reps < 1) throw std::invalid_argument("check_bercu_touati: reps must be >= 1");
  require_grid(x_grid, "check_bercu_touati");
  const double v_sq = static_cast<double>(n) * innov.variance();

  // Common random numbers: one (S, Q) pair per replication serves the whole
  // x grid, making the empirical curve exactly nonincreasing.
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(reps) * x_grid.size(), 0);
  par.for_each_index(reps, [&](std::int64_t r) {
    SiteStream stream(derive_seed(seed, static_cast<std::uint64_t>(r)));
    double s = 0.0, q = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = innov.draw(stream);
      s += d;
      q += d * d;
    }
    if (q > y) return;
    const double abs_s = std::abs(s);
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
      if (abs_s > x_grid[k]) hits[static_cast<std::size_t>(r) * x_grid.size() + k] = 1;
    }
  });
  std::vector<std::int64_t> counts(x_grid.size(), 0);
  for (std::int64_t r = 0; r < reps; ++r) {
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
      counts[k] += hits[static_cast<std::size_t>(r) * x_grid.size() + k];
    }
  }
  std::vector<double> bounds(x_grid.size());
  for (std::size_t k = 0; k < x_grid.size(); ++k) {
    bounds[k] = 2.0 * std::exp(-x_grid[k] * x_grid[k] / (2.0 * (y + v_sq)));
  }
  return assemble("bercu_touati", reps, seed, x_grid, counts, bounds);
}

VerifyReport check_freedman(const InnovationSpec& innov, int n, const std::vector<double>& x_grid,
                            double y, std::int64_t reps, std::uint64_t seed,
                            const ParallelContext& par) {
  if (!innov.bounded_support()) {
    throw capability_error(
        "check_freedman: the hypothesis requires bounded increments (there exists a c>0 with "
        "|d_j| <= c); innovation '" +
        innov.name() + "' is unbounded");
  }
  if (n < 1) throw std::invalid_argument("check_freedman: n must be >= 1");
  if (reps < 1) throw std::invalid_argument("check_freedman: reps must be >= 1");
  require_grid(x_grid, "check_freedman");
  const double c = innov.support_bound();
  const double var_sum = static_cast<double>(n) * innov.variance();
  if (!(y >= var_sum)) {
    throw std::invalid_argument("check_freedman: need y >= sum E d_i^2 = " + std::to_string(var_sum));
  }

  std::vector<std::uint8_t> hits(static_cast<std::size_t>(reps) * x_grid.size(), 0);
  par.for_each_index(reps, [&](std::int64_t r) {
    SiteStream stream(derive_seed(seed, static_cast<std::uint64_t>(r)));
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += innov.draw(stream);
    const double abs_s = std::abs(s);
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
      if (abs_s > x_grid[k]) hits[static_cast<std::size_t>(r) * x_grid.size() + k] = 1;
    }
  });
  std::vector<std::int64_t> counts(x_grid.size(), 0);
  for (std::int64_t r = 0; r < reps; ++r) {
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
      counts[k] += hits[static_cast<std::size_t>(r) * x_grid.size() + k];
    }
  }
  std::vector<double> bounds(x_grid.size());
  for (std::size_t k = 0; k < x_grid.size(); ++k) {
    bounds[k] = 2.0 * std::exp(-(y / (c * c)) * freedman_h(x_grid[k] * c / y));
  }
  // The bound is decreasing in x; a violation here is a programming error.
  for (std::size_t k = 1; k < bounds.size(); ++k) assert(bounds[k] <= bounds[k - 1]);
  return assemble("freedman", reps, seed, x_grid, counts, bounds);
}

VerifyReport check_maximal_ergodic(const FieldModel& model, SiteTransform transform,
                                   std::int64_t n_max, const std::vector<double>& y_grid,
                                   std::int64_t reps, std::int64_t tail_reps, std::uint64_t seed,
                                   const ParallelContext& par) {
  if (n_max < 1) throw std::invalid_argument("check_maximal_ergodic: n_max must be >= 1");
  if (reps < 1 || tail_reps < 1) {
    throw std::invalid_argument("check_maximal_ergodic: reps and tail_reps must be >= 1");
  }
  require_grid(y_grid, "check_maximal_ergodic");
  const int d = model_dim(model);
  const auto apply = [transform](double v) {
    const double out = transform == SiteTransform::absolute_value ? std::abs(v) : v * v;
    if (out < 0.0) throw std::invalid_argument("check_maximal_ergodic: negative transformed value");
    return out;
  };

  // Left side: sup over anchored boxes of the block average, one realization
  // per replication, shared across the y grid.
  const Rect block(LatticeIndex::ones(d), LatticeIndex::constant(d, n_max));
  std::vector<double> sups(static_cast<std::size_t>(reps));
  par.for_each_index(reps, [&](std::int64_t r) {
    ValueGrid grid = simulate_block(model, block, derive_seed(seed, static_cast<std::uint64_t>(r)));
    for (double& v : grid.values()) v = apply(v);
    const PrefixTable table = build_prefix_table(grid);
    double best = 0.0;
    for_each_site(std::span<const Coord>(grid.extents()),
                  [&](std::int64_t flat, std::span<const Coord> idx) {
                    std::int64_t card = 1;
                    for (int q = 0; q < d; ++q) card *= idx[static_cast<std::size_t>(q)] + 1;
                    best = std::max(best, table.anchored_flat(flat) / static_cast<double>(card));
                  });
    sups[static_cast<std::size_t>(r)] = best;
  });
  std::vector<std::int64_t> counts(y_grid.size(), 0);
  for (double s : sups) {
    for (std::size_t k = 0; k < y_grid.size(); ++k) {
      if (s > y_grid[k]) ++counts[k];
    }
  }

  // Right side: empirical single-site tail from an independent split sample.
  const std::uint64_t tail_seed = derive_seed(seed, 0x7461696cULL);
  const Rect site_block(LatticeIndex::ones(d), LatticeIndex::ones(d));
  std::vector<double> tail(static_cast<std::size_t>(tail_reps));
  par.for_each_index(tail_reps, [&](std::int64_t r) {
    const ValueGrid g =
        simulate_block(model, site_block, derive_seed(tail_seed, static_cast<std::uint64_t>(r)));
    tail[static_cast<std::size_t>(r)] = apply(g.flat(0));
  });
  std::sort(tail.begin(), tail.end());

  const double scale = std::pow(2.0, -d);
  std::vector<double> bounds(y_grid.size());
  for (std::size_t k = 0; k < y_grid.size(); ++k) {
    const double y = y_grid[k];
    // P_hat(Y > y u 2^-d) is a step function of u with jumps at
    // u_i = v_i 2^d / y; integrate (log u)^(d-1) exactly between jumps.
    std::vector<double> knots;
    knots.push_back(1.0);
    for (double v : tail) {
      const double u = v / (y * scale);
      if (u > 1.0) knots.push_back(u);
    }
    std::sort(knots.begin(), knots.end());
    double integral = 0.0;
    const double m = static_cast<double>(tail_reps);
    for (std::size_t t = 0; t + 1 < knots.size(); ++t) {
      const double a = knots[t];
      const double b = knots[t + 1];
      if (!(b > a)) continue;
      const double mid_level = y * scale * 0.5 * (a + b);
      const auto it = std::upper_bound(tail.begin(), tail.end(), mid_level);
      const double p = static_cast<double>(tail.end() - it) / m;
      if (p == 0.0) continue;
      integral += p * (log_power_antiderivative(d - 1, b) - log_power_antiderivative(d - 1, a));
    }
    bounds[k] = integral;
  }
  return assemble("maximal_ergodic", reps, seed, y_grid, counts, bounds);
}

std::string to_json_string(const VerifyReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["reps"] = report.reps;
  j["seed"] = report.seed;
  j["all_pass"] = report.all_pass;
  j["points"] = nlohmann::json::array();
  for (const VerifyPoint& pt : report.points) {
    j["points"].push_back({{"threshold", pt.threshold},
                           {"empirical", pt.empirical},
                           {"se", pt.se},
                           {"bound", pt.bound},
                           {"pass", pt.pass}});
  }
  return j.dump(2);
}

std::string to_csv_string(const VerifyReport& report) {
  std::string out = "name,threshold,empirical,se,bound,pass\n";
  for (const VerifyPoint& pt : report.points) {
    out += report.name;
    out += ',';
    out += format_double(pt.threshold);
    out += ',';
    out += format_double(pt.empirical);
    out += ',';
    out += format_double(pt.se);
    out += ',';
    out += format_double(pt.bound);
    out += ',';
    out += pt.pass ? "1" : "0";
    out += '\n';
  }
  return out;
}

}  // namespace lilfields
