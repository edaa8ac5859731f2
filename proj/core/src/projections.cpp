#include "lilfields/projections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lilfields {

namespace {

// Innovation value at an absolute site for the realization addressed by
// rep_seed; the same site always yields the same value within a replication.
double eps_at(const InnovationSpec& innov, std::uint64_t rep_seed, std::span<const Coord> site) {
  SiteStream s(rep_seed, site);
  return innov.draw(s);
}

constexpr std::uint64_t kInnerLevelTag = 0x70726f6a;  // offsets inner-MC seed derivation

}  // namespace

std::vector<LatticeIndex> shell_sites(int d, Coord j) {
  if (d < 1) throw std::invalid_argument("shell_sites: d must be >= 1");
  if (j < 0) throw std::invalid_argument("shell_sites: j must be >= 0");
  std::vector<LatticeIndex> out;
  if (j == 0) {
    out.push_back(LatticeIndex::zero(d));
    return out;
  }
  const Coord width = 2 * j + 1;
  std::vector<Coord> extents(static_cast<std::size_t>(d), width);
  std::vector<Coord> site(static_cast<std::size_t>(d));
  for_each_site(std::span<const Coord>(extents), [&](std::int64_t, std::span<const Coord> idx) {
    Coord m = 0;
    for (int q = 0; q < d; ++q) {
      site[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q)] - j;
      m = std::max(m, std::abs(site[static_cast<std::size_t>(q)]));
    }
    if (m == j) out.emplace_back(site);
  });
  return out;
}

ProjectionLevel::ProjectionLevel(FieldModel model, int j, int inner_samples)
    : model_(std::move(model)), j_(j), inner_samples_(inner_samples) {
  if (j_ < 0) throw std::domain_error("ProjectionLevel: level j must be >= 0");
  if (inner_samples_ < 1) throw std::invalid_argument("ProjectionLevel: inner_samples must be >= 1");
  closed_form_ = std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        return std::is_same_v<T, IidModel> || std::is_same_v<T, LinearModel> ||
               std::is_same_v<T, VolterraModel> || std::is_same_v<T, HermiteFunctionalModel>;
      },
      model_);
  if (const auto* hm = std::get_if<HermiteFunctionalModel>(&model_)) {
    double cur = 0.0, prev = 0.0;
    for (const auto& [i, a] : hm->coeffs.entries()) {
      const Coord n = i.linf();
      if (n <= j_) cur += a * a;
      if (n <= j_ - 1) prev += a * a;
    }
    s_cur_ = std::sqrt(cur);
    s_prev_ = std::sqrt(prev);
  }
}

double ProjectionLevel::sample(std::uint64_t rep_seed) const {
  if (identically_zero()) return 0.0;
  const int d = model_dim(model_);
  const int j = j_;

  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IidModel>) {
          if (j > 0) return 0.0;
          const LatticeIndex origin = LatticeIndex::zero(d);
          return eps_at(m.innov, rep_seed, origin.span());
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          // X_{0,j} = sum_{||i||=j} a_i eps_{-i}
          double acc = 0.0;
          std::vector<Coord> site(static_cast<std::size_t>(d));
          for (const auto& [i, a] : m.coeffs.entries()) {
            if (i.linf() != j) continue;
            for (int q = 0; q < d; ++q) site[static_cast<std::size_t>(q)] = -i[q];
            acc += a * eps_at(m.innov, rep_seed, site);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, VolterraModel>) {
          // Level 0 vanishes because the diagonal vanishes; level j collects
          // the pairs whose outer sup-norm is exactly j (the three shell
          // sums of the corollary proof combined).
          if (j == 0) return 0.0;
          double acc = 0.0;
          std::vector<Coord> site1(static_cast<std::size_t>(d)), site2(static_cast<std::size_t>(d));
          for (const auto& [key, a] : m.coeffs.entries()) {
            const auto& [s1, s2] = key;
            if (std::max(s1.linf(), s2.linf()) != j) continue;
            for (int q = 0; q < d; ++q) {
              site1[static_cast<std::size_t>(q)] = -s1[q];
              site2[static_cast<std::size_t>(q)] = -s2[q];
            }
            acc += a * eps_at(m.innov, rep_seed, site1) * eps_at(m.innov, rep_seed, site2);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, HermiteFunctionalModel>) {
          // E[H_q(Y)|F_j] = s_j^q H_q(A_j/s_j) with A_j the within-window
          // part of Y and s_j its standard deviation.
          double a_cur = 0.0, a_prev = 0.0;
          std::vector<Coord> site(static_cast<std::size_t>(d));
          for (const auto& [i, a] : m.coeffs.entries()) {
            const Coord n = i.linf();
            if (n > j) continue;
            for (int q = 0; q < d; ++q) site[static_cast<std::size_t>(q)] = -i[q];
            const double e = a * eps_at(m.innov, rep_seed, site);
            a_cur += e;
            if (n <= j - 1) a_prev += e;
          }
          double acc = 0.0;
          const int Q = static_cast<int>(m.hermite_c.size());
          for (int q = 1; q <= Q; ++q) {
            const double cq = m.hermite_c[static_cast<std::size_t>(q - 1)];
            if (cq == 0.0) continue;
            double term = s_cur_ > 0.0
                              ? conditional_hermite_projection(q, s_cur_, a_cur / s_cur_)
                              : 0.0;
            if (j >= 1 && s_prev_ > 0.0) {
              term -= conditional_hermite_projection(q, s_prev_, a_prev / s_prev_);
            }
            acc += cq * term;
          }
          return acc;
        } else {
          // Nested Monte Carlo: condition on the window draws and integrate
          // the complement by inner replication, independently per level.
          const Coord radius = m.coeffs.support_radius();
          std::vector<Coord> site(static_cast<std::size_t>(d));
          auto window_sum = [&](Coord window) {
            double acc = 0.0;
            for (const auto& [i, a] : m.coeffs.entries()) {
              if (i.linf() > window) continue;
              for (int q = 0; q < d; ++q) site[static_cast<std::size_t>(q)] = -i[q];
              acc += a * eps_at(m.innov, rep_seed, site);
            }
            return acc;
          };
          auto conditional_mean = [&](Coord window, std::uint64_t level_tag) {
            const double inside = window_sum(window);
            if (window >= radius) return m.g(inside) - m.centering;
            const std::uint64_t base = derive_seed(rep_seed, kInnerLevelTag + level_tag);
            double mean = 0.0;
            for (int t = 0; t < inner_samples_; ++t) {
              const std::uint64_t inner_seed = derive_seed(base, static_cast<std::uint64_t>(t));
              double outside = 0.0;
              for (const auto& [i, a] : m.coeffs.entries()) {
                if (i.linf() <= window) continue;
                for (int q = 0; q < d; ++q) site[static_cast<std::size_t>(q)] = -i[q];
                outside += a * eps_at(m.innov, inner_seed, site);
              }
              mean += m.g(inside + outside) - m.centering;
            }
            return mean / static_cast<double>(inner_samples_);
          };
          const double cur = conditional_mean(j, 2 * static_cast<std::uint64_t>(j));
          if (j == 0) return cur;
          return cur - conditional_mean(j - 1, 2 * static_cast<std::uint64_t>(j) + 1);
        }
      },
      model_);
}

ProjectionLevel projection_sampler(const FieldModel& model, int j, int inner_samples) {
  return ProjectionLevel(model, j, inner_samples);
}

NormEstimate projection_norm(const ProjectionLevel& level, const OrliczParams& params,
                             const McConfig& mc, const ParallelContext& par) {
  if (level.identically_zero()) return {0.0, 0.0};
  const bool l2 = params.p == 2.0 && params.r == 0.0;
  if (l2) {
    if (const auto* lm = std::get_if<LinearModel>(&level.model())) {
      return {std::sqrt(lm->coeffs.shell_sum_sq(level.level())), 0.0};
    }
    if (const auto* vm = std::get_if<VolterraModel>(&level.model())) {
      return {std::sqrt(vm->coeffs.projection_l2_sq(level.level())), 0.0};
    }
  }
  if (mc.reps < 1000) {
    throw std::invalid_argument("projection_norm: mc.reps must be >= 1000");
  }
  std::vector<double> values(static_cast<std::size_t>(mc.reps));
  par.for_each_index(mc.reps, [&](std::int64_t r) {
    values[static_cast<std::size_t>(r)] = level.sample(derive_seed(mc.seed, static_cast<std::uint64_t>(r)));
  });
  const double norm = orlicz_norm_samples(std::span<const double>(values), params);
  const double se = orlicz_norm_delta_se(std::span<const double>(values), params, norm);
  return {norm, se};
}

NormEstimate physical_dependence(const FieldModel& model, const LatticeIndex& i, double r,
                                 const McConfig& mc, const ParallelContext& par) {
  if (i.dim() != model_dim(model)) {
    throw std::invalid_argument("physical_dependence: site dimension mismatch");
  }
  if (i.linf() > model_support_radius(model)) return {0.0, 0.0};
  const OrliczParams params(2.0, r);
  const Rect block(i, i);
  const LatticeIndex origin = LatticeIndex::zero(i.dim());
  std::vector<double> values(static_cast<std::size_t>(mc.reps));
  par.for_each_index(mc.reps, [&](std::int64_t rep) {
    const std::uint64_t rs = derive_seed(mc.seed, static_cast<std::uint64_t>(rep));
    const auto [grid, swapped] = simulate_coupled_pair(model, block, rs, origin);
    values[static_cast<std::size_t>(rep)] = grid.at(i) - swapped.at(i);
  });
  const double norm = orlicz_norm_samples(std::span<const double>(values), params);
  const double se = orlicz_norm_delta_se(std::span<const double>(values), params, norm);
  return {norm, se};
}

DependenceProfile dependence_profile(const FieldModel& model, double r, const McConfig& mc,
                                     const ParallelContext& par) {
  DependenceProfile profile;
  profile.d = model_dim(model);
  profile.r = r;
  profile.radius = model_support_radius(model);
  profile.reps = mc.reps;
  for (Coord j = 0; j <= profile.radius; ++j) {
    for (const LatticeIndex& site : shell_sites(profile.d, j)) {
      profile.delta[site] = physical_dependence(model, site, r, mc, par);
    }
  }
  return profile;
}

double shell_aggregate(const DependenceProfile& profile, Coord j) {
  if (j < 0) throw std::invalid_argument("shell_aggregate: j must be >= 0");
  if (j > profile.radius) return 0.0;  // zero outside the support radius
  double acc = 0.0;
  std::string missing;
  for (const LatticeIndex& site : shell_sites(profile.d, j)) {
    const auto it = profile.delta.find(site);
    if (it == profile.delta.end()) {
      missing += (missing.empty() ? "" : ", ") + to_string(site);
      continue;
    }
    acc += it->second.value * it->second.value;
  }
  if (!missing.empty()) {
    throw std::invalid_argument("shell_aggregate: profile is missing shell-" + std::to_string(j) +
                                " sites " + missing);
  }
  return std::sqrt(acc);
}

}  // namespace lilfields
